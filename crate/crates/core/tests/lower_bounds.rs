use std::sync::Arc;

use ipsforge_core::gf::{FieldElem, FieldTower, Level};
use ipsforge_core::lowerbounds::{
    coefficient_matrix, eval_dimension, inverse_on_cube, lifted_instance, ml_inverse, roabp_width, top_coeff, Budget,
    LiftKind,
};
use ipsforge_core::poly::{cube_point, Monomial};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded(t: &FieldTower, n: usize, seed: u64) -> (Vec<FieldElem>, FieldElem) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas = (0..n).map(|_| t.embed(&t.sample(Level::Base, &mut rng))).collect();
    (alphas, t.sample_beta(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The interpolated inverse times the linear form is 1 at every cube point.
    #[test]
    fn inverse_is_pointwise(n in 0usize..=6, seed in any::<u64>()) {
        let t = FieldTower::new(3, 2).unwrap();
        let ext = t.ext();
        let (alphas, beta) = seeded(&t, n, seed);
        let inv = ml_inverse(ext, &alphas, &beta).unwrap();
        prop_assert!(inv.is_multilinear());
        for idx in 0..1u64 << n {
            let x = cube_point(ext, n, idx);
            let mut l = ext.neg(&beta);
            for (a, xi) in alphas.iter().zip(&x) {
                l = ext.add(&l, &ext.mul(a, xi));
            }
            prop_assert_eq!(ext.mul(&inv.eval(&x).unwrap(), &l), ext.one());
        }
    }

    /// The top coefficient is the Moebius sum of the point values.
    #[test]
    fn top_coefficient_by_moebius(n in 1usize..=6, seed in any::<u64>()) {
        let t = FieldTower::new(2, 6).unwrap();
        let ext = t.ext();
        let (alphas, beta) = seeded(&t, n, seed);
        let top = top_coeff(ext, &alphas, &beta).unwrap();
        prop_assert!(top.agree());
        let inv = ml_inverse(ext, &alphas, &beta).unwrap();
        let mut sum = ext.zero();
        for idx in 0..1u64 << n {
            let v = inv.eval(&cube_point(ext, n, idx)).unwrap();
            sum = if (n - idx.count_ones() as usize).is_multiple_of(2) { ext.add(&sum, &v) } else { ext.sub(&sum, &v) };
        }
        prop_assert_eq!(&sum, &top.interpolated);
        let full = Monomial::from_mask(n, (1u64 << n) - 1);
        prop_assert_eq!(inv.coeff(&full), sum);
    }

    #[test]
    fn widths_bound_cut_ranks(seed in any::<u64>(), n in 2usize..=3) {
        let t = Arc::new(FieldTower::new(2, 6).unwrap());
        let lifted = lifted_instance(LiftKind::FixedOrder, n, &t, seed).unwrap();
        let inv = inverse_on_cube(lifted.polynomial(), &Budget::default()).unwrap();
        let (x, y) = (lifted.x_vars(), lifted.y_vars());
        let rank = coefficient_matrix(&inv, &x, &y).rank();
        let order: Vec<usize> = x.iter().chain(&y).copied().collect();
        prop_assert!(roabp_width(&inv, &order) >= rank);
        prop_assert!(eval_dimension(&inv, &x, &y) <= rank);
        prop_assert!(rank <= 1 << n);
    }
}

#[test]
fn budget_caps_are_enforced() {
    let t = FieldTower::new(2, 4).unwrap();
    let (alphas, beta) = seeded(&t, 5, 1);
    let small = Budget {
        cube_vars: 4,
        symbolic_n: 2,
    };
    let err = ipsforge_core::lowerbounds::ml_inverse_with(t.ext(), &alphas, &beta, &small).unwrap_err();
    assert_eq!(err.code(), "budget_exceeded");
}
