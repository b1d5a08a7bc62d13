use std::collections::HashSet;
use std::sync::Arc;

use super::{Certificate, Provenance};
use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldTower};
use crate::poly::{AxiomKind, Monomial, Poly};

/// Iterates of L_{j+1} = L_j^p - sum_i alpha_i^{p^{j+1}} (x_i^p - x_i) with
/// L_j = A_j L_0 + sum_i B_{j,i} (x_i^p - x_i) at every step.
#[derive(Debug, Clone)]
pub struct FrobeniusTrace {
    pub l: Vec<Poly>,
    pub a: Vec<Poly>,
    pub b: Vec<Vec<Poly>>,
}

impl FrobeniusTrace {
    /// L_j - A_j L_0 - sum_i B_{j,i} (x_i^p - x_i), which should vanish.
    pub fn defect(&self, j: usize) -> Poly {
        let l0 = &self.l[0];
        let field = l0.field().clone();
        let n = l0.nvars();
        let p = field.characteristic();
        let mut acc = &self.l[j] - &(&self.a[j] * l0);
        for (i, b) in self.b[j].iter().enumerate() {
            if !b.is_zero() {
                acc = &acc - &(b * &AxiomKind::Fermat(p).axiom(&field, n, i));
            }
        }
        acc
    }
}

/// Coefficients alpha_i of x_i and the constant term of a degree-one polynomial.
pub(crate) fn linear_parts(l: &Poly) -> Result<(Vec<FieldElem>, FieldElem)> {
    if l.degree() > 1 {
        return Err(Error::NotLinear);
    }
    let n = l.nvars();
    let alphas = (0..n).map(|i| l.coeff(&Monomial::var(n, i))).collect();
    Ok((alphas, l.constant_term()))
}

/// Whether sum alpha_i x_i + c misses zero on {0,1}^n, by growing the set of
/// reachable partial sums one variable at a time.
pub fn is_unsat_on_cube(l: &Poly) -> Result<bool> {
    let (alphas, c) = linear_parts(l)?;
    let f = l.field();
    let mut reach: HashSet<FieldElem> = HashSet::from([f.zero()]);
    for a in alphas.iter().filter(|a| !a.is_zero()) {
        let shifted: Vec<FieldElem> = reach.iter().map(|s| f.add(s, a)).collect();
        reach.extend(shifted);
    }
    Ok(!reach.contains(&f.neg(&c)))
}

fn check_linear_over_tower(l: &Poly, tower: &FieldTower) -> Result<(Vec<FieldElem>, FieldElem)> {
    if l.field().spec() != tower.ext().spec() {
        return Err(Error::LevelMismatch);
    }
    let (alphas, c0) = linear_parts(l)?;
    if let Some(i) = alphas.iter().position(|a| !tower.is_in_subfield(a)) {
        return Err(Error::FieldMismatch(format!(
            "coefficient of variable {} lies outside the base field",
            i + 1
        )));
    }
    if tower.is_in_subfield(&c0) {
        return Err(Error::BetaInSubfield);
    }
    Ok((alphas, c0))
}

/// Runs the k Frobenius steps on L over the extension field.
pub fn frobenius_trace(l: &Poly, tower: &FieldTower) -> Result<FrobeniusTrace> {
    let (alphas, _) = check_linear_over_tower(l, tower)?;
    let field = l.field().clone();
    let n = l.nvars();
    let p = tower.p();
    let mut trace = FrobeniusTrace {
        l: vec![l.clone()],
        a: vec![Poly::one(&field, n)],
        b: vec![vec![Poly::zero(&field, n); n]],
    };
    for j in 0..tower.k() {
        let lp = trace.l[j].pow(p - 1);
        let a_next = &trace.a[j] * &lp;
        let b_next = trace.b[j]
            .iter()
            .zip(&alphas)
            .map(|(b, alpha)| {
                let shift = Poly::constant(&field, n, field.frobenius(alpha, j + 1));
                &(b * &lp) - &shift
            })
            .collect();
        let l_next = trace.l[j].frobenius_coeffs(1);
        trace.l.push(l_next);
        trace.a.push(a_next);
        trace.b.push(b_next);
    }
    Ok(trace)
}

/// Certificate for sum alpha_i x_i - beta with alpha_i in the base field and
/// beta outside it, in degree at most k(p-1) + p - 2.
///
/// Unrolling the recurrence gives A_k = P_0 and
/// B_{k,i} = -sum_{j=1..k} alpha_i^{p^j} P_j with P_j = prod_{l=j}^{k-1} L_l^{p-1},
/// so only the k suffix products are expanded.
pub fn refute_linear_frobenius(l: &Poly, tower: &Arc<FieldTower>) -> Result<Certificate> {
    let (alphas, c0) = check_linear_over_tower(l, tower)?;
    let field = l.field().clone();
    let n = l.nvars();
    let p = tower.p();
    let k = tower.k();
    let mut iterates = vec![l.clone()];
    for _ in 1..k {
        let next = iterates.last().expect("nonempty").frobenius_coeffs(1);
        iterates.push(next);
    }
    let mut suffix = vec![Poly::one(&field, n); k + 1];
    for j in (0..k).rev() {
        suffix[j] = &suffix[j + 1] * &iterates[j].pow(p - 1);
    }
    let c = field.sub(&field.frobenius(&c0, k), &c0);
    let c_inv = field.inv(&c).map_err(|_| Error::BetaInSubfield)?;
    let a = (&suffix[0] - &Poly::one(&field, n)).scale(&c_inv);
    let b = alphas
        .iter()
        .enumerate()
        .map(|(i, alpha)| {
            let mut bk = Poly::zero(&field, n);
            for (j, pj) in suffix.iter().enumerate().skip(1) {
                let coeff = field.neg(&field.mul(&field.frobenius(alpha, j), &c_inv));
                bk = &bk + &pj.scale(&coeff);
            }
            let x = Poly::var(&field, n, i);
            let mut geometric = Poly::zero(&field, n);
            for e in 0..=p.saturating_sub(2) {
                geometric = &geometric + &x.pow(e);
            }
            &bk * &geometric
        })
        .collect();
    Ok(Certificate {
        a: vec![a],
        b,
        provenance: Provenance::new("frobenius").with("p", p).with("k", k).with("n", n),
        modeled_depth: 3,
    })
}
