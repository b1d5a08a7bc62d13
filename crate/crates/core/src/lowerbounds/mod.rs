//! Exact oracles for degree, sparsity and rank lower bounds on inverses of
//! subset-sum style polynomials over the Boolean cube.

mod lifted;
mod rank;
mod trials;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::poly::{cube_interpolate, Monomial, Poly};

pub use lifted::{balanced_partitions, lifted_instance, LiftKind, LiftedInstance};
pub use rank::{coefficient_matrix, eval_dimension, roabp_width, CoefficientMatrix};
pub use trials::{degree_trial, restricted_degree_scan, sparsity_probe, RestrictionScan, SparsityProbe, TrialReport};

/// A 64-bit prime, the largest below 2^64.
pub const PRIME_64: u64 = 18_446_744_073_709_551_557;

/// Size caps for brute-force computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// most variables a 2^n cube table may have
    pub cube_vars: usize,
    /// largest n for the symbolic expansion over all nonempty subsets
    pub symbolic_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cube_vars: 12,
            symbolic_n: 5,
        }
    }
}

impl Budget {
    pub fn check_cube(&self, n: usize) -> Result<()> {
        if n > self.cube_vars {
            return Err(Error::BudgetExceeded {
                what: "cube variables".into(),
                got: n,
                cap: self.cube_vars,
            });
        }
        Ok(())
    }
}

/// Values of a function on {0,1}^n; bit i of the index is x_{i+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeTable {
    pub field: Arc<Field>,
    pub n: usize,
    pub values: Vec<FieldElem>,
}

impl CubeTable {
    /// 1/(sum_{i in a} alpha_i - beta) at every cube point a.
    pub fn inverse_of_linear(
        field: &Arc<Field>,
        alphas: &[FieldElem],
        beta: &FieldElem,
        budget: &Budget,
    ) -> Result<Self> {
        let n = alphas.len();
        budget.check_cube(n)?;
        let mut sums = vec![field.neg(beta); 1 << n];
        for mask in 1..sums.len() {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = field.add(&sums[mask & (mask - 1)], &alphas[low]);
        }
        let values = sums
            .iter()
            .map(|s| field.inv(s).map_err(|_| Error::ZeroDenominator))
            .collect::<Result<Vec<_>>>()?;
        Ok(CubeTable {
            field: field.clone(),
            n,
            values,
        })
    }

    /// 1/g at every cube point.
    pub fn inverse_of(g: &Poly, budget: &Budget) -> Result<Self> {
        budget.check_cube(g.nvars())?;
        let values = g
            .ml()
            .eval_on_cube()?
            .iter()
            .map(|v| g.field().inv(v).map_err(|_| Error::ZeroDenominator))
            .collect::<Result<Vec<_>>>()?;
        Ok(CubeTable {
            field: g.field().clone(),
            n: g.nvars(),
            values,
        })
    }

    pub fn to_poly(&self) -> Result<Poly> {
        cube_interpolate(&self.field, self.n, &self.values)
    }
}

/// The multilinear polynomial agreeing with 1/(sum alpha_i x_i - beta) on
/// the cube; all inputs live in one field.
pub fn ml_inverse(field: &Arc<Field>, alphas: &[FieldElem], beta: &FieldElem) -> Result<Poly> {
    ml_inverse_with(field, alphas, beta, &Budget::default())
}

pub fn ml_inverse_with(field: &Arc<Field>, alphas: &[FieldElem], beta: &FieldElem, budget: &Budget) -> Result<Poly> {
    CubeTable::inverse_of_linear(field, alphas, beta, budget)?.to_poly()
}

/// The multilinear polynomial agreeing with 1/g on the cube.
pub fn inverse_on_cube(g: &Poly, budget: &Budget) -> Result<Poly> {
    CubeTable::inverse_of(g, budget)?.to_poly()
}

fn sign(field: &Field, odd: bool, v: FieldElem) -> FieldElem {
    if odd {
        field.neg(&v)
    } else {
        v
    }
}

/// sum_a (-1)^{n-|a|} f(a), the coefficient of x_1...x_n in ml(f).
pub fn alternating_cube_sum(f: &Poly) -> Result<FieldElem> {
    let field = f.field();
    let n = f.nvars();
    let values = f.ml().eval_on_cube()?;
    Ok(values.into_iter().enumerate().fold(field.zero(), |acc, (a, v)| {
        let odd = (n - (a as u64).count_ones() as usize) % 2 == 1;
        field.add(&acc, &sign(field, odd, v))
    }))
}

/// The x_1...x_n coefficient of the inverse, computed three independent ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopCoefficient {
    /// alternating sum of the cube values of the interpolated inverse
    pub alternating: FieldElem,
    /// sum_V (-1)^{n-|V|} / (sum_{i in V} alpha_i - beta) over subsets V
    pub closed_form: FieldElem,
    /// read off the interpolated polynomial
    pub interpolated: FieldElem,
}

impl TopCoefficient {
    pub fn agree(&self) -> bool {
        self.alternating == self.closed_form && self.closed_form == self.interpolated
    }
}

pub fn top_coeff(field: &Arc<Field>, alphas: &[FieldElem], beta: &FieldElem) -> Result<TopCoefficient> {
    let n = alphas.len();
    let inverse = ml_inverse(field, alphas, beta)?;
    let alternating = alternating_cube_sum(&inverse)?;
    let mut closed_form = field.zero();
    for mask in 0u64..(1u64 << n) {
        let mut denom = field.neg(beta);
        for (i, a) in alphas.iter().enumerate() {
            if mask >> i & 1 == 1 {
                denom = field.add(&denom, a);
            }
        }
        let term = field.inv(&denom).map_err(|_| Error::ZeroDenominator)?;
        let odd = (n - mask.count_ones() as usize) % 2 == 1;
        closed_form = field.add(&closed_form, &sign(field, odd, term));
    }
    let full = Monomial::from_mask(n, (1u64 << n) - 1);
    Ok(TopCoefficient {
        alternating,
        closed_form,
        interpolated: inverse.coeff(&full),
    })
}

/// Coefficient of prod_i z_i^{2^{i-1}} in prod_{T nonempty} (sum_{i in T} z_i - beta).
pub fn numerator_monomial_check(field: &Arc<Field>, n: usize, beta: &FieldElem, budget: &Budget) -> Result<FieldElem> {
    if n > budget.symbolic_n {
        return Err(Error::BudgetExceeded {
            what: "symbolic subset product n".into(),
            got: n,
            cap: budget.symbolic_n,
        });
    }
    let target: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
    let mut product = Poly::one(field, n);
    for mask in 1u64..(1u64 << n) {
        let mut factor = Poly::constant(field, n, field.neg(beta));
        for i in 0..n {
            if mask >> i & 1 == 1 {
                factor = &factor + &Poly::var(field, n, i);
            }
        }
        product = &product * &factor;
        // drop terms that already exceed the target exponent somewhere
        product = Poly::from_terms(
            field,
            n,
            product
                .terms()
                .filter(|(m, _)| m.exponents().iter().zip(&target).all(|(e, t)| e <= t))
                .map(|(m, c)| (m.clone(), c.clone())),
        )?;
    }
    Ok(product.coeff(&Monomial::from_exponents(&target)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;
    use crate::poly::{parse_poly, AxiomKind, VarLayout};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_inverse_is_constant() {
        let tower = FieldTower::new(2, 1).unwrap();
        let ext = tower.ext();
        let t = ext.generator();
        let inv = ml_inverse(ext, &[], &t).unwrap();
        assert_eq!(inv, Poly::constant(ext, 0, ext.neg(&ext.inv(&t).unwrap())));
    }

    #[test]
    fn f4_single_variable() {
        let tower = FieldTower::new(2, 1).unwrap();
        let ext = tower.ext();
        let t = ext.generator();
        let f = ml_inverse(ext, &[ext.one()], &t).unwrap();
        let v0 = ext.inv(&ext.neg(&t)).unwrap();
        let v1 = ext.inv(&ext.sub(&ext.one(), &t)).unwrap();
        let expected = &Poly::constant(ext, 1, v0.clone()) + &Poly::var(ext, 1, 0).scale(&ext.sub(&v1, &v0));
        assert_eq!(f, expected);
        let l = parse_poly(ext, &VarLayout::x(1), "x1 + [0,1]").unwrap();
        let reduced = (&f * &l).divide_by_axioms(AxiomKind::Boolean).remainder;
        assert!(reduced.is_one());
    }

    #[test]
    fn inverse_times_form_is_one() {
        let tower = FieldTower::new(3, 2).unwrap();
        let ext = tower.ext();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 0..6 {
            let alphas: Vec<_> = (0..n).map(|_| tower.embed(&tower.base().sample(&mut rng))).collect();
            let beta = tower.sample_beta(&mut rng);
            let f = ml_inverse(ext, &alphas, &beta).unwrap();
            assert!(f.is_multilinear());
            let mut l = Poly::constant(ext, n, ext.neg(&beta));
            for (i, a) in alphas.iter().enumerate() {
                l = &l + &Poly::var(ext, n, i).scale(a);
            }
            assert!((&f * &l).divide_by_axioms(AxiomKind::Boolean).remainder.is_one());
            assert_eq!(inverse_on_cube(&l, &Budget::default()).unwrap(), f);
        }
    }

    #[test]
    fn zero_denominator() {
        let f = Arc::new(Field::prime(5).unwrap());
        let alphas = [f.from_u64(1), f.from_u64(2)];
        assert_eq!(ml_inverse(&f, &alphas, &f.from_u64(3)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn inverse_degree_in_base_field() {
        let f = Arc::new(Field::with_degree(2, 3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 10 {
            let alphas: Vec<_> = (0..5).map(|_| f.sample(&mut rng)).collect();
            let beta = f.sample(&mut rng);
            if let Ok(inv) = ml_inverse(&f, &alphas, &beta) {
                assert!(inv.degree() <= 3);
                checked += 1;
            }
        }
    }

    #[test]
    fn top_coefficient_single_variable() {
        let tower = FieldTower::new(3, 1).unwrap();
        let ext = tower.ext();
        let alpha = ext.from_u64(2);
        let beta = ext.generator();
        let tc = top_coeff(ext, std::slice::from_ref(&alpha), &beta).unwrap();
        let direct = ext.sub(
            &ext.inv(&ext.sub(&alpha, &beta)).unwrap(),
            &ext.inv(&ext.neg(&beta)).unwrap(),
        );
        assert!(tc.agree());
        assert_eq!(tc.closed_form, direct);
    }

    #[test]
    fn alternating_sum_of_a_monomial() {
        let f = Arc::new(Field::prime(7).unwrap());
        let p = parse_poly(&f, &VarLayout::x(2), "x1*x2").unwrap();
        assert_eq!(alternating_cube_sum(&p).unwrap(), f.one());
    }

    #[test]
    fn numerator_coefficient_small_cases() {
        for p in [2u64, 3] {
            let f = Arc::new(Field::prime(p).unwrap());
            for n in 1..=3 {
                let c = numerator_monomial_check(&f, n, &f.one(), &Budget::default()).unwrap();
                assert!(f.is_one(&c), "p={p} n={n}");
            }
        }
        let f = Arc::new(Field::prime(5).unwrap());
        assert!(matches!(
            numerator_monomial_check(&f, 6, &f.one(), &Budget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
