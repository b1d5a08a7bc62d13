use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Certificate, Instance, Provenance};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::linalg::solve_sparse;
use crate::poly::{AxiomKind, Monomial, Poly};

/// Which monomials a multiplier may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "degree")]
pub enum DegreeBound {
    /// total degree at most d
    Total(usize),
    /// every exponent at most d
    Individual(u32),
}

impl fmt::Display for DegreeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeBound::Total(d) => write!(f, "total degree {d}"),
            DegreeBound::Individual(d) => write!(f, "individual degree {d}"),
        }
    }
}

impl DegreeBound {
    /// Monomials within the bound, ascending in grlex.
    pub fn monomials(self, n: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        match self {
            DegreeBound::Total(d) => total_rec(&mut exps, 0, d as u32, &mut out),
            DegreeBound::Individual(d) => indiv_rec(&mut exps, 0, d, &mut out),
        }
        out.sort();
        out
    }
}

fn total_rec(exps: &mut Vec<u32>, i: usize, budget: u32, out: &mut Vec<Monomial>) {
    if i == exps.len() {
        out.push(Monomial::from_exponents(exps));
        return;
    }
    for e in 0..=budget {
        exps[i] = e;
        total_rec(exps, i + 1, budget - e, out);
    }
    exps[i] = 0;
}

fn indiv_rec(exps: &mut Vec<u32>, i: usize, d: u32, out: &mut Vec<Monomial>) {
    if i == exps.len() {
        out.push(Monomial::from_exponents(exps));
        return;
    }
    for e in 0..=d {
        exps[i] = e;
        indiv_rec(exps, i + 1, d, out);
    }
    exps[i] = 0;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NullstellensatzOutcome {
    /// multipliers with sum_i A_i f_i = 1
    Found(Vec<Poly>),
    NoCertificateAtDegree,
}

/// Looks for A_i within `bounds[i]` with sum_i A_i f_i = 1 by exact linear
/// algebra over the monomial basis. Unknowns are ordered by axiom, then by
/// ascending monomial; free unknowns are set to zero.
pub fn solve_nullstellensatz(axioms: &[Poly], bounds: &[DegreeBound]) -> Result<NullstellensatzOutcome> {
    let Some(first) = axioms.first() else {
        return Ok(NullstellensatzOutcome::NoCertificateAtDegree);
    };
    if bounds.len() != axioms.len() {
        return Err(Error::ArityMismatch {
            expected: axioms.len(),
            got: bounds.len(),
        });
    }
    let field = first.field().clone();
    let n = first.nvars();
    for f in axioms {
        if f.nvars() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: f.nvars(),
            });
        }
        if f.field().spec() != field.spec() {
            return Err(Error::LevelMismatch);
        }
    }
    let mut columns: Vec<(usize, Monomial)> = Vec::new();
    for (i, b) in bounds.iter().enumerate() {
        if axioms[i].is_zero() {
            continue;
        }
        columns.extend(b.monomials(n).into_iter().map(|m| (i, m)));
    }
    let mut equations: HashMap<Monomial, BTreeMap<usize, FieldElem>> = HashMap::new();
    for (col, (i, m)) in columns.iter().enumerate() {
        for (mf, c) in axioms[*i].terms() {
            let entry = equations.entry(m.mul(mf)).or_default();
            let cur = entry.remove(&col).unwrap_or_else(|| field.zero());
            let next = field.add(&cur, c);
            if !next.is_zero() {
                entry.insert(col, next);
            }
        }
    }
    let one = Monomial::one(n);
    equations.entry(one.clone()).or_default();
    let mut rows: Vec<(Monomial, BTreeMap<usize, FieldElem>)> = equations.into_iter().collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let sparse_rows = rows.into_iter().map(|(m, row)| {
        let rhs = if m == one { field.one() } else { field.zero() };
        (row, rhs)
    });
    let Some(solution) = solve_sparse(&field, columns.len(), sparse_rows) else {
        return Ok(NullstellensatzOutcome::NoCertificateAtDegree);
    };
    let mut multipliers = vec![Poly::zero(&field, n); axioms.len()];
    for ((i, m), v) in columns.into_iter().zip(solution) {
        if !v.is_zero() {
            multipliers[i] = &multipliers[i] + &Poly::monomial(&field, m, v);
        }
    }
    Ok(NullstellensatzOutcome::Found(multipliers))
}

/// Smallest uniform total degree d <= `max_degree` at which the instance
/// axioms together with x_j^2 - x_j admit a certificate.
pub fn refute_nullstellensatz(instance: &Instance, max_degree: usize) -> Result<(Certificate, usize)> {
    let field = &instance.field;
    let n = instance.nvars();
    let m = instance.axioms.len();
    let mut axioms = instance.axioms.clone();
    axioms.extend((0..n).map(|j| AxiomKind::Boolean.axiom(field, n, j)));
    for d in 0..=max_degree {
        let bounds = vec![DegreeBound::Total(d); axioms.len()];
        if let NullstellensatzOutcome::Found(mut mult) = solve_nullstellensatz(&axioms, &bounds)? {
            let b = mult.split_off(m);
            let cert = Certificate {
                a: mult,
                b,
                provenance: Provenance::new("nullstellensatz").with("degree_bound", d),
                modeled_depth: 2,
            };
            return Ok((cert, d));
        }
    }
    Err(Error::NoCertificateAtDegree {
        bound: DegreeBound::Total(max_degree).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::instances::linear_base_unsat;
    use crate::certificates::{refute_linear_lowdegree, verify, InstanceFamily};
    use crate::gf::Field;
    use crate::poly::{parse_poly, VarLayout};
    use std::sync::Arc;

    #[test]
    fn monomial_counts() {
        assert_eq!(DegreeBound::Total(2).monomials(3).len(), 10);
        assert_eq!(DegreeBound::Individual(1).monomials(3).len(), 8);
        assert_eq!(DegreeBound::Total(0).monomials(0).len(), 1);
    }

    #[test]
    fn two_contradictory_axioms() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let layout = VarLayout::x(1);
        let axioms = vec![
            parse_poly(&f2, &layout, "x1").unwrap(),
            parse_poly(&f2, &layout, "x1 + 1").unwrap(),
        ];
        let bounds = [DegreeBound::Total(0); 2];
        let NullstellensatzOutcome::Found(a) = solve_nullstellensatz(&axioms, &bounds).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(a, vec![Poly::one(&f2, 1), Poly::one(&f2, 1)]);
    }

    #[test]
    fn unit_axiom() {
        let f = Arc::new(Field::prime(3).unwrap());
        let axioms = vec![Poly::one(&f, 2)];
        assert_eq!(
            solve_nullstellensatz(&axioms, &[DegreeBound::Total(0)]).unwrap(),
            NullstellensatzOutcome::Found(vec![Poly::one(&f, 2)])
        );
    }

    #[test]
    fn satisfiable_system_has_no_certificate() {
        let f = Arc::new(Field::prime(3).unwrap());
        let layout = VarLayout::x(2);
        let inst = Instance::new(
            &f,
            layout.clone(),
            vec![parse_poly(&f, &layout, "x1 + x2 + 1").unwrap()],
            InstanceFamily::Custom,
        )
        .unwrap();
        assert!(matches!(
            refute_nullstellensatz(&inst, 3),
            Err(Error::NoCertificateAtDegree { .. })
        ));
    }

    #[test]
    fn minimum_degree_matches_lowdegree_construction() {
        for (p, k, n) in [(5u64, 1usize, 2usize), (2, 2, 3), (2, 3, 3), (3, 2, 3)] {
            let field = Arc::new(Field::with_degree(p, k).unwrap());
            for seed in 0..3 {
                let inst = linear_base_unsat(&field, n, seed).unwrap();
                let low = refute_linear_lowdegree(&inst.axioms[0]).unwrap();
                let (cert, d) = refute_nullstellensatz(&inst, 8).unwrap();
                assert_eq!(d, low.a[0].degree(), "p={p} k={k} seed={seed}");
                assert!(verify(&inst, &cert).unwrap().valid);
                let bounds = vec![DegreeBound::Total(d + 1); n + 1];
                let mut axioms = inst.axioms.clone();
                axioms.extend((0..n).map(|j| AxiomKind::Boolean.axiom(&field, n, j)));
                assert!(matches!(
                    solve_nullstellensatz(&axioms, &bounds).unwrap(),
                    NullstellensatzOutcome::Found(_)
                ));
            }
        }
    }
}
