use super::frobenius::is_unsat_on_cube;
use super::{Certificate, Provenance};
use crate::error::{Error, Result};
use crate::poly::{AxiomKind, Poly};

/// ml[g^e] by square-and-multiply, multilinearizing after every product.
fn ml_pow(g: &Poly, mut e: u64) -> Poly {
    let mut acc = Poly::one(g.field(), g.nvars());
    let mut base = g.ml();
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).ml();
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).ml();
        }
    }
    acc
}

/// ml[L^{q-2}] from the base-p digits of q - 2, using L^{p^j} = L'_j on the
/// cube where L'_j raises each coefficient to the p^j-th power.
pub fn ml_power_inverse(l: &Poly) -> Result<Poly> {
    let field = l.field();
    let p = field.characteristic();
    let q = field
        .order()
        .ok_or_else(|| Error::OutOfRange(format!("field {} is too large", field.spec())))?;
    let mut rest = q - 2;
    let mut acc = Poly::one(field, l.nvars());
    let mut j = 0;
    while rest > 0 {
        let digit = (rest % p as u128) as u64;
        if digit > 0 {
            acc = (&acc * &ml_pow(&l.frobenius_coeffs(j), digit)).ml();
        }
        rest /= p as u128;
        j += 1;
    }
    Ok(acc)
}

/// Certificate A = ml[L^{q-2}] for a linear L over F_q without cube zeros;
/// deg(A) <= k(p-1).
pub fn refute_linear_lowdegree(l: &Poly) -> Result<Certificate> {
    if !is_unsat_on_cube(l)? {
        return Err(Error::SatisfiableInstance);
    }
    let a = ml_power_inverse(l)?;
    let split = (&a * l).divide_by_axioms(AxiomKind::Boolean);
    if !split.remainder.is_one() {
        return Err(Error::Internal(format!(
            "ml(A*L) reduced to {:?} instead of 1",
            split.remainder
        )));
    }
    let field = l.field();
    Ok(Certificate {
        a: vec![a],
        b: split.quotients.iter().map(Poly::neg).collect(),
        provenance: Provenance::new("lowdegree")
            .with("p", field.characteristic())
            .with("k", field.degree())
            .with("n", l.nvars()),
        modeled_depth: 2,
    })
}
