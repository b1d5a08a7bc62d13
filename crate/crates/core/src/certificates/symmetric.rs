use std::collections::BTreeMap;
use std::sync::Arc;

use super::nullstellensatz::{solve_nullstellensatz, DegreeBound, NullstellensatzOutcome};
use super::{Certificate, Provenance};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::poly::{AxiomKind, Monomial, Poly};
use crate::symfun::{
    compress_expansion, digit_count, ml_prod_elem, qt_poly, sym_to_elem_basis, ElemSymExpansion, MlProduct,
};

/// Intermediate objects of the symmetric pipeline.
#[derive(Debug, Clone)]
pub struct SymmetricTrace {
    /// weight tables of the input polynomials
    pub tables: Vec<Vec<FieldElem>>,
    /// F_i(y_1..y_r) with f_i = F_i(e_1, e_p, ..) on the cube
    pub compressed: Vec<Poly>,
    /// (t, Q_t) for n < t <= p^r - 1
    pub qt: Vec<(usize, Poly)>,
    /// multipliers of the low-variate system F_i, Q_t, y_j^p - y_j
    pub low_variate: Vec<Poly>,
    pub bound: DegreeBound,
    /// every product ml[e_{p^j}...] used while lifting
    pub products: Vec<MlProduct>,
}

/// Lifts a polynomial in y_j = e_{p^j} to its multilinear symmetric image.
fn lift(field: &Arc<Field>, n: usize, g: &Poly, cache: &mut BTreeMap<Monomial, MlProduct>) -> Result<ElemSymExpansion> {
    let p = field.characteristic() as usize;
    let mut acc = ElemSymExpansion::new(field, vec![field.zero(); n + 1]);
    for (gamma, c) in g.terms() {
        if !cache.contains_key(gamma) {
            let alphas: Vec<usize> = gamma
                .exponents()
                .iter()
                .enumerate()
                .flat_map(|(j, &e)| std::iter::repeat_n(p.pow(j as u32), e as usize))
                .collect();
            cache.insert(gamma.clone(), ml_prod_elem(field, n, &alphas)?);
        }
        acc = acc.add(&cache[gamma].expansion.scale(c));
    }
    Ok(acc)
}

pub fn symmetric_pipeline(system: &[Poly]) -> Result<(Certificate, SymmetricTrace)> {
    let Some(first) = system.first() else {
        return Err(Error::OutOfRange("empty system".into()));
    };
    let field = first.field().clone();
    let n = first.nvars();
    let p = field.characteristic();
    for f in system {
        if f.nvars() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: f.nvars(),
            });
        }
        if f.field().spec() != field.spec() {
            return Err(Error::LevelMismatch);
        }
        if !f.is_multilinear() {
            return Err(Error::OutOfRange("symmetric systems must be multilinear".into()));
        }
    }
    let expansions = system.iter().map(sym_to_elem_basis).collect::<Result<Vec<_>>>()?;
    let tables: Vec<Vec<FieldElem>> = expansions.iter().map(|e| e.weight_table()).collect();
    if let Some(w) = (0..=n).find(|&w| tables.iter().all(|t| t[w].is_zero())) {
        return Err(Error::SatisfiableSystem { weight: w });
    }
    let compressed = expansions
        .iter()
        .map(|e| compress_expansion(e).map(|c| c.poly))
        .collect::<Result<Vec<_>>>()?;
    let r = digit_count(n, p);
    let top = (p as usize).pow(r as u32) - 1;
    let qt = (n + 1..=top)
        .map(|t| qt_poly(&field, n, t).map(|q| (t, q)))
        .collect::<Result<Vec<_>>>()?;
    let mut low_axioms = compressed.clone();
    low_axioms.extend(qt.iter().map(|(_, q)| q.clone()));
    let named = low_axioms.len();
    low_axioms.extend((0..r).map(|j| AxiomKind::Fermat(p).axiom(&field, r, j)));

    let mut found = None;
    for d in [p as u32 - 1, 2 * p as u32 - 2, 3 * p as u32 - 3] {
        let bound = DegreeBound::Individual(d.max(1));
        let bounds = vec![bound; low_axioms.len()];
        if let NullstellensatzOutcome::Found(mult) = solve_nullstellensatz(&low_axioms, &bounds)? {
            found = Some((bound, mult));
            break;
        }
    }
    let Some((bound, low_variate)) = found else {
        return Err(Error::NoCertificateAtDegree {
            bound: DegreeBound::Individual(3 * p as u32 - 3).to_string(),
        });
    };

    let mut cache = BTreeMap::new();
    let mut a = Vec::with_capacity(system.len());
    for g in &low_variate[..system.len()] {
        let (reduced, _) = g.inddeg_p(p);
        a.push(lift(&field, n, &reduced, &mut cache)?.to_poly()?);
    }
    let mut combination = Poly::zero(&field, n);
    for (ai, fi) in a.iter().zip(system) {
        combination = &combination + &(ai * fi);
    }
    let split = combination.divide_by_axioms(AxiomKind::Boolean);
    if !split.remainder.is_one() {
        return Err(Error::Internal(format!(
            "lifted combination reduced to {:?} instead of 1",
            split.remainder
        )));
    }
    let cert = Certificate {
        a,
        b: split.quotients.iter().map(Poly::neg).collect(),
        provenance: Provenance::new("symmetric")
            .with("p", p)
            .with("n", n)
            .with("m", system.len())
            .with("r", r)
            .with("low_variate_bound", bound)
            .with("low_variate_axioms", named + r),
        modeled_depth: 8,
    };
    let trace = SymmetricTrace {
        tables,
        compressed,
        qt,
        low_variate,
        bound,
        products: cache.into_values().collect(),
    };
    Ok((cert, trace))
}

/// Certificate for multilinear symmetric f_1..f_m without a common cube
/// zero, routed through the compressed system in log_p n variables.
pub fn refute_symmetric_system(system: &[Poly]) -> Result<Certificate> {
    symmetric_pipeline(system).map(|(cert, _)| cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::instances::symmetric_system;
    use crate::certificates::{verify, Instance, InstanceFamily};
    use crate::poly::VarLayout;
    use crate::symfun::elem_sym;

    fn instance(field: &Arc<Field>, axioms: Vec<Poly>) -> Instance {
        let n = axioms[0].nvars();
        Instance::new(field, VarLayout::x(n), axioms, InstanceFamily::SymmetricSystem).unwrap()
    }

    #[test]
    fn complementary_pair_over_f2() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let e1 = elem_sym(&f2, 3, 1).unwrap();
        let system = vec![e1.clone(), &e1 + &Poly::one(&f2, 3)];
        let cert = refute_symmetric_system(&system).unwrap();
        assert!(verify(&instance(&f2, system), &cert).unwrap().valid);
    }

    #[test]
    fn nowhere_zero_over_f3() {
        let f3 = Arc::new(Field::prime(3).unwrap());
        let f = &(&elem_sym(&f3, 2, 1).unwrap() + &elem_sym(&f3, 2, 2).unwrap()) + &Poly::one(&f3, 2);
        let (cert, trace) = symmetric_pipeline(std::slice::from_ref(&f)).unwrap();
        let values: Vec<u64> = trace.tables[0].iter().map(|v| v.coeffs()[0]).collect();
        assert_eq!(values, vec![1, 2, 1]);
        assert!(verify(&instance(&f3, vec![f]), &cert).unwrap().valid);
    }

    #[test]
    fn satisfiable_system_is_reported() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let f = &elem_sym(&f2, 4, 1).unwrap() + &elem_sym(&f2, 4, 2).unwrap();
        assert!(matches!(
            refute_symmetric_system(&[f]),
            Err(Error::SatisfiableSystem { weight: 0 })
        ));
    }

    #[test]
    fn random_systems() {
        for p in [2u64, 3] {
            let field = Arc::new(Field::prime(p).unwrap());
            for (seed, n) in (0..6).zip([3usize, 5, 8, 4, 7, 6]) {
                let inst = symmetric_system(&field, n, 1 + seed as usize % 3, seed).unwrap();
                let (cert, trace) = symmetric_pipeline(&inst.axioms).unwrap();
                assert!(verify(&inst, &cert).unwrap().valid, "p={p} n={n}");
                for prod in &trace.products {
                    assert!(prod.residual().unwrap().is_zero());
                }
            }
        }
    }
}
