use std::sync::Arc;

use super::frobenius::refute_linear_frobenius;
use super::{Certificate, Provenance};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldTower};
use crate::poly::{Monomial, Poly};

fn geometric(field: &Arc<Field>, n: usize, var: usize, top: i64) -> Poly {
    let x = Poly::var(field, n, var);
    let mut acc = Poly::zero(field, n);
    for e in 0..=top {
        acc = &acc + &x.pow(e as u64);
    }
    acc
}

/// E_{mu,1..n} with (x^mu)^2 - x^mu = sum_j E_{mu,j} (x_j^2 - x_j), peeling
/// the largest-index variable of the support first.
pub fn monomial_axiom_expansion(field: &Arc<Field>, mu: &Monomial) -> Vec<Poly> {
    let n = mu.nvars();
    let support = mu.support();
    let Some(&t) = support.last() else {
        return vec![Poly::zero(field, n); n];
    };
    let a = mu.exp(t) as i64;
    let mut nu = mu.clone();
    nu.set_exp(t, 0);
    let x_nu = Poly::monomial(field, nu.clone(), field.one());
    let mut out: Vec<Poly> = monomial_axiom_expansion(field, &nu)
        .iter()
        .map(|e| {
            if e.is_zero() {
                e.clone()
            } else {
                e.shift(&Monomial::var(n, t))
            }
        })
        .collect();
    let square_part = &geometric(field, n, t, 2 * a - 2) * &(&x_nu * &x_nu);
    let linear_part = &geometric(field, n, t, a - 2) * &x_nu;
    out[t] = &square_part - &linear_part;
    out
}

/// Certificate for f(x) - beta with base-field coefficients: the nonconstant
/// monomials become fresh variables, the linear certificate is pulled back
/// along y_mu -> x^mu and each (x^mu)^2 - x^mu is rewritten in the x axioms.
pub fn refute_sparse(f: &Poly, tower: &Arc<FieldTower>) -> Result<Certificate> {
    let field = tower.ext().clone();
    if f.field().spec() != field.spec() {
        return Err(Error::LevelMismatch);
    }
    let n = f.nvars();
    let monomials: Vec<Monomial> = f
        .terms()
        .rev()
        .map(|(m, _)| m.clone())
        .filter(|m| !m.is_one())
        .collect();
    let s = monomials.len();
    let mut flat = Poly::constant(&field, s, f.constant_term());
    for (i, m) in monomials.iter().enumerate() {
        flat = &flat + &Poly::var(&field, s, i).scale(&f.coeff(m));
    }
    let linear = refute_linear_frobenius(&flat, tower)?;
    let images: Vec<Poly> = monomials
        .iter()
        .map(|m| Poly::monomial(&field, m.clone(), field.one()))
        .collect();
    let pull = |p: &Poly| -> Result<Poly> {
        if s == 0 {
            Ok(Poly::constant(&field, n, p.constant_term()))
        } else {
            p.compose(&images)
        }
    };
    let a = pull(&linear.a[0])?;
    let mut b = vec![Poly::zero(&field, n); n];
    for (mu, b_mu) in monomials.iter().zip(&linear.b) {
        if b_mu.is_zero() {
            continue;
        }
        let lifted = pull(b_mu)?;
        for (j, e) in monomial_axiom_expansion(&field, mu).into_iter().enumerate() {
            if !e.is_zero() {
                b[j] = &b[j] + &(&lifted * &e);
            }
        }
    }
    Ok(Certificate {
        a: vec![a],
        b,
        provenance: Provenance::new("sparse")
            .with("p", tower.p())
            .with("k", tower.k())
            .with("sparsity", s)
            .with("degree", f.degree()),
        modeled_depth: 5,
    })
}
