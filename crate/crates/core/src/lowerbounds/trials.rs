use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{ml_inverse_with, Budget};
use crate::error::Result;
use crate::gf::{Field, FieldElem, FieldTower, Level};

/// Degrees of the inverses of every restriction sum_{i in U} alpha_i x_i - beta.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionScan {
    /// (U as a bit mask over variables, degree of the inverse)
    pub degrees: Vec<(u64, usize)>,
    /// the U with the largest deficit |U| - degree, if any deficit exists
    pub worst: Option<(u64, usize)>,
}

impl RestrictionScan {
    pub fn all_full(&self) -> bool {
        self.worst.is_none()
    }
}

pub fn restricted_degree_scan(
    field: &Arc<Field>,
    alphas: &[FieldElem],
    beta: &FieldElem,
    budget: &Budget,
) -> Result<RestrictionScan> {
    let n = alphas.len();
    budget.check_cube(n)?;
    let mut degrees = Vec::with_capacity((1 << n) - 1);
    let mut worst: Option<(u64, usize, usize)> = None;
    for mask in 1u64..(1u64 << n) {
        let sub: Vec<FieldElem> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| alphas[i].clone())
            .collect();
        let deg = ml_inverse_with(field, &sub, beta, budget)?.degree();
        let deficit = sub.len() - deg.min(sub.len());
        if deficit > 0 && worst.is_none_or(|(_, _, d)| deficit > d) {
            worst = Some((mask, deg, deficit));
        }
        degrees.push((mask, deg));
    }
    Ok(RestrictionScan {
        degrees,
        worst: worst.map(|(m, d, _)| (m, d)),
    })
}

/// Monte Carlo estimate of Pr[deg ml_inverse = n] for alpha uniform over the
/// base field, against the single-form and all-restrictions bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub n: usize,
    pub p: u64,
    pub k: usize,
    pub seed: u64,
    pub trials: usize,
    /// trials with deg = n
    pub successes: usize,
    /// trials where every nonempty restriction U had deg = |U|
    pub successes_all_restrictions: usize,
    pub rate: f64,
    pub rate_all_restrictions: f64,
    /// 1 - (2^n - 1)/|S|
    pub bound_single: f64,
    /// 1 - sum_U (2^|U| - 1)/|S|
    pub bound_union_exact: f64,
    /// 1 - 2^{2n}/|S|
    pub bound_union: f64,
    /// true when the single-form bound is at most zero
    pub vacuous: bool,
    /// sqrt(b(1-b)/trials) for b = bound_union clamped to [0,1]
    pub sigma: f64,
}

impl TrialReport {
    /// Whether the observed rate clears `bound - sigmas * sigma`.
    pub fn within(&self, bound: f64, sigmas: f64) -> bool {
        self.rate >= bound - sigmas * self.sigma
    }
}

pub fn degree_trial(tower: &FieldTower, n: usize, trials: usize, seed: u64, budget: &Budget) -> Result<TrialReport> {
    budget.check_cube(n)?;
    let ext = tower.ext();
    let mut beta_rng = ChaCha8Rng::seed_from_u64(seed);
    beta_rng.set_stream(u64::MAX);
    let beta = tower.sample_beta(&mut beta_rng);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let alphas: Vec<FieldElem> = (0..n)
                .map(|_| tower.embed(&tower.sample(Level::Base, &mut rng)))
                .collect();
            let full = ml_inverse_with(ext, &alphas, &beta, budget)?.degree() == n;
            let scan = restricted_degree_scan(ext, &alphas, &beta, budget)?;
            Ok((full, scan.all_full()))
        })
        .collect::<Result<Vec<(bool, bool)>>>()?;
    let successes = outcomes.iter().filter(|o| o.0).count();
    let successes_all = outcomes.iter().filter(|o| o.1).count();
    let s = (tower.p() as f64).powi(tower.k() as i32);
    let pow2 = |e: usize| 2f64.powi(e as i32);
    let union_sum: f64 = (1..=n).map(|u| binomial(n, u) * (pow2(u) - 1.0)).sum::<f64>() / s;
    let bound_single = 1.0 - (pow2(n) - 1.0) / s;
    let bound_union = 1.0 - pow2(2 * n) / s;
    let b = bound_union.clamp(0.0, 1.0);
    let denom = trials.max(1) as f64;
    Ok(TrialReport {
        n,
        p: tower.p(),
        k: tower.k(),
        seed,
        trials,
        successes,
        successes_all_restrictions: successes_all,
        rate: successes as f64 / denom,
        rate_all_restrictions: successes_all as f64 / denom,
        bound_single,
        bound_union_exact: 1.0 - union_sum,
        bound_union,
        vacuous: bound_single <= 0.0,
        sigma: (b * (1.0 - b) / denom).sqrt(),
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sparsity of the multilinear inverse next to the bound 2^{n/4 - 1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsityProbe {
    pub n: usize,
    pub sparsity: usize,
    pub bound: f64,
    pub meets_bound: bool,
}

pub fn sparsity_probe(
    field: &Arc<Field>,
    alphas: &[FieldElem],
    beta: &FieldElem,
    budget: &Budget,
) -> Result<SparsityProbe> {
    let n = alphas.len();
    let sparsity = ml_inverse_with(field, alphas, beta, budget)?.sparsity();
    let bound = 2f64.powf(n as f64 / 4.0 - 1.0);
    Ok(SparsityProbe {
        n,
        sparsity,
        bound,
        meets_bound: sparsity as f64 >= bound,
    })
}
