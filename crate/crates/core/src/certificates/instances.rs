//! Seeded instance generators.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::frobenius::is_unsat_on_cube;
use super::{Instance, InstanceFamily};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, FieldTower, Level};
use crate::poly::{Monomial, Poly, VarLayout};
use crate::symfun::ElemSymExpansion;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// sum alpha_i x_i - beta over the extension, alpha_i nonzero in the base
/// field and beta outside it.
pub fn linear_shifted(tower: &Arc<FieldTower>, n: usize, seed: u64) -> Result<Instance> {
    let mut rng = rng(seed);
    let alphas: Vec<FieldElem> = (0..n).map(|_| tower.base().sample_nonzero(&mut rng)).collect();
    let beta = tower.sample_beta(&mut rng);
    let ext = tower.ext();
    let mut l = Poly::constant(ext, n, ext.neg(&beta));
    for (i, a) in alphas.iter().enumerate() {
        l = &l + &Poly::var(ext, n, i).scale(&tower.embed(a));
    }
    Instance::new(ext, VarLayout::x(n), vec![l], InstanceFamily::Linear)?.over_tower(tower, Level::Ext)
}

fn reachable_sums(field: &Field, alphas: &[FieldElem]) -> HashSet<FieldElem> {
    let mut reach: HashSet<FieldElem> = HashSet::from([field.zero()]);
    for a in alphas {
        let shifted: Vec<FieldElem> = reach.iter().map(|s| field.add(s, a)).collect();
        reach.extend(shifted);
    }
    reach
}

/// sum alpha_i x_i - beta with every coefficient in `field` and no zero on
/// the cube. Odd attempts draw the alpha_i from a random proper F_p-subspace
/// so that small fields still leave room for beta.
pub fn linear_base_unsat(field: &Arc<Field>, n: usize, seed: u64) -> Result<Instance> {
    let mut rng = rng(seed);
    let p = field.characteristic();
    let k = field.degree();
    for attempt in 0..64 {
        let alphas: Vec<FieldElem> = if attempt % 2 == 1 && k >= 2 {
            let basis: Vec<FieldElem> = (0..k - 1).map(|_| field.sample_nonzero(&mut rng)).collect();
            (0..n)
                .map(|_| loop {
                    let a = basis.iter().fold(field.zero(), |acc, v| {
                        field.add(&acc, &field.mul(&field.from_u64(rng.gen_range(0..p)), v))
                    });
                    if !a.is_zero() {
                        break a;
                    }
                })
                .collect()
        } else {
            (0..n).map(|_| field.sample_nonzero(&mut rng)).collect()
        };
        let reach = reachable_sums(field, &alphas);
        let Some(beta) = (0..256).map(|_| field.sample(&mut rng)).find(|b| !reach.contains(b)) else {
            continue;
        };
        let mut l = Poly::constant(field, n, field.neg(&beta));
        for (i, a) in alphas.iter().enumerate() {
            l = &l + &Poly::var(field, n, i).scale(a);
        }
        debug_assert!(is_unsat_on_cube(&l)?);
        return Instance::new(field, VarLayout::x(n), vec![l], InstanceFamily::Linear);
    }
    Err(Error::SatisfiableInstance)
}

/// f(x) - beta with `s` distinct nonconstant monomials of degree at most
/// `d`, base-field coefficients and beta outside the base field.
pub fn sparse_shifted(tower: &Arc<FieldTower>, n: usize, s: usize, d: u32, seed: u64) -> Result<Instance> {
    if n == 0 || d == 0 {
        return Err(Error::OutOfRange("sparse instances need n >= 1 and d >= 1".into()));
    }
    let mut rng = rng(seed);
    let mut monomials = BTreeSet::new();
    let mut attempts = 0;
    while monomials.len() < s {
        attempts += 1;
        if attempts > 100 * (s + 1) {
            return Err(Error::OutOfRange(format!(
                "could not draw {s} distinct monomials of degree <= {d} in {n} variables"
            )));
        }
        let target = rng.gen_range(1..=d);
        let mut exps = vec![0u32; n];
        for _ in 0..target {
            exps[rng.gen_range(0..n)] += 1;
        }
        monomials.insert(Monomial::from_exponents(&exps));
    }
    let ext = tower.ext();
    let beta = tower.sample_beta(&mut rng);
    let mut f = Poly::constant(ext, n, ext.neg(&beta));
    for m in monomials {
        let c = tower.embed(&tower.base().sample_nonzero(&mut rng));
        f = &f + &Poly::monomial(ext, m, c);
    }
    Instance::new(ext, VarLayout::x(n), vec![f], InstanceFamily::SparseShifted)?.over_tower(tower, Level::Ext)
}

/// Index of z_{i,j} (i < j, zero-based) among the pairs listed row by row.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// sum_{i<j} alpha_{ij} z_{ij} x_i x_j - beta in variables x1..xn, z1..z_{n choose 2}.
pub fn pairwise_lifted(tower: &Arc<FieldTower>, n: usize, seed: u64) -> Result<Instance> {
    let mut rng = rng(seed);
    let pairs = n * n.saturating_sub(1) / 2;
    let total = n + pairs;
    let ext = tower.ext();
    let beta = tower.sample_beta(&mut rng);
    let mut f = Poly::constant(ext, total, ext.neg(&beta));
    for i in 0..n {
        for j in i + 1..n {
            let alpha = tower.embed(&tower.base().sample_nonzero(&mut rng));
            let mut exps = vec![0u32; total];
            exps[i] = 1;
            exps[j] = 1;
            exps[n + pair_index(n, i, j)] = 1;
            f = &f + &Poly::monomial(ext, Monomial::from_exponents(&exps), alpha);
        }
    }
    Instance::new(
        ext,
        VarLayout::pair(n, 'z', pairs),
        vec![f],
        InstanceFamily::LiftedSubsetSum,
    )?
    .over_tower(tower, Level::Ext)
}

/// m multilinear symmetric polynomials in n variables with no common zero
/// on the cube, built from random weight tables.
pub fn symmetric_system(field: &Arc<Field>, n: usize, m: usize, seed: u64) -> Result<Instance> {
    if m == 0 {
        return Err(Error::OutOfRange("a system needs at least one polynomial".into()));
    }
    let mut rng = rng(seed);
    let mut tables: Vec<Vec<FieldElem>> = (0..m)
        .map(|_| {
            (0..=n)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        field.zero()
                    } else {
                        field.sample(&mut rng)
                    }
                })
                .collect()
        })
        .collect();
    for w in 0..=n {
        if tables.iter().all(|t| t[w].is_zero()) {
            let i = rng.gen_range(0..m);
            tables[i][w] = field.sample_nonzero(&mut rng);
        }
    }
    let axioms = tables
        .iter()
        .map(|t| ElemSymExpansion::from_weight_table(field, t).to_poly())
        .collect::<Result<Vec<_>>>()?;
    Instance::new(field, VarLayout::x(n), axioms, InstanceFamily::SymmetricSystem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::weight_table;

    #[test]
    fn generators_are_deterministic() {
        let tower = Arc::new(FieldTower::new(2, 2).unwrap());
        let a = sparse_shifted(&tower, 3, 4, 3, 9).unwrap();
        let b = sparse_shifted(&tower, 3, 4, 3, 9).unwrap();
        assert_eq!(a.axioms, b.axioms);
        assert_eq!(a.axioms[0].sparsity(), 5);
        assert!(!tower.is_in_subfield(&a.beta().unwrap()));
    }

    #[test]
    fn pair_indices_are_consecutive() {
        let n = 5;
        let mut expected = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), expected);
                expected += 1;
            }
        }
        let tower = Arc::new(FieldTower::new(2, 3).unwrap());
        let inst = pairwise_lifted(&tower, 4, 0).unwrap();
        assert_eq!(inst.layout.to_string(), "x4,z6");
        assert_eq!(inst.axioms[0].sparsity(), 7);
    }

    #[test]
    fn symmetric_systems_have_no_common_zero() {
        let f = Arc::new(Field::prime(3).unwrap());
        for seed in 0..10 {
            let inst = symmetric_system(&f, 5, 2, seed).unwrap();
            let tables: Vec<_> = inst.axioms.iter().map(|p| weight_table(p).unwrap()).collect();
            for w in 0..=5 {
                assert!(tables.iter().any(|t| !t[w].is_zero()));
            }
        }
    }

    #[test]
    fn base_unsat_instances() {
        let f = Arc::new(Field::with_degree(3, 2).unwrap());
        let inst = linear_base_unsat(&f, 3, 1).unwrap();
        assert!(is_unsat_on_cube(&inst.axioms[0]).unwrap());
        let f2 = Arc::new(Field::prime(2).unwrap());
        assert!(matches!(linear_base_unsat(&f2, 1, 0), Err(Error::SatisfiableInstance)));
    }
}
