use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificates::instances::{pair_index, pairwise_lifted};
use crate::certificates::{Instance, InstanceFamily};
use crate::error::{Error, Result};
use crate::gf::{FieldTower, Level};
use crate::poly::{Poly, VarLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftKind {
    /// sum_i alpha_i x_i y_i - beta
    FixedOrder,
    /// sum_{i<j} alpha_{ij} z_{ij} x_i x_j - beta over 2n x variables
    AnyOrder,
}

impl LiftKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fixed-order" => Ok(LiftKind::FixedOrder),
            "any-order" => Ok(LiftKind::AnyOrder),
            _ => Err(Error::Unknown {
                kind: "lift kind",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LiftedInstance {
    pub kind: LiftKind,
    pub n: usize,
    pub instance: Instance,
}

pub fn lifted_instance(kind: LiftKind, n: usize, tower: &Arc<FieldTower>, seed: u64) -> Result<LiftedInstance> {
    let instance = match kind {
        LiftKind::FixedOrder => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ext = tower.ext();
            let beta = tower.sample_beta(&mut rng);
            let mut f = Poly::constant(ext, 2 * n, ext.neg(&beta));
            for i in 0..n {
                let alpha = tower.embed(&tower.base().sample_nonzero(&mut rng));
                let xy = &Poly::var(ext, 2 * n, i) * &Poly::var(ext, 2 * n, n + i);
                f = &f + &xy.scale(&alpha);
            }
            Instance::new(
                ext,
                VarLayout::pair(n, 'y', n),
                vec![f],
                InstanceFamily::LiftedSubsetSum,
            )?
            .over_tower(tower, Level::Ext)?
        }
        LiftKind::AnyOrder => pairwise_lifted(tower, 2 * n, seed)?,
    };
    Ok(LiftedInstance { kind, n, instance })
}

/// Balanced splits (u, v) of 2n variables with variable 0 in u, each side sorted.
pub fn balanced_partitions(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let total = 2 * n;
    let mut out = Vec::new();
    if n == 0 {
        out.push((Vec::new(), Vec::new()));
        return out;
    }
    for mask in 0u64..(1u64 << total) {
        if mask & 1 == 1 && mask.count_ones() as usize == n {
            let u = (0..total).filter(|i| mask >> i & 1 == 1).collect();
            let v = (0..total).filter(|i| mask >> i & 1 == 0).collect();
            out.push((u, v));
        }
    }
    out
}

impl LiftedInstance {
    pub fn polynomial(&self) -> &Poly {
        &self.instance.axioms[0]
    }

    /// Indices of the x variables.
    pub fn x_vars(&self) -> Vec<usize> {
        match self.kind {
            LiftKind::FixedOrder => (0..self.n).collect(),
            LiftKind::AnyOrder => (0..2 * self.n).collect(),
        }
    }

    /// Indices of the y variables of the fixed-order instance.
    pub fn y_vars(&self) -> Vec<usize> {
        match self.kind {
            LiftKind::FixedOrder => (self.n..2 * self.n).collect(),
            LiftKind::AnyOrder => Vec::new(),
        }
    }

    /// The 0/1 vector b_{u,v} over the z variables: z_{ij} = 1 exactly when
    /// {x_i, x_j} = {u_k, v_k} for some k, pairing sorted u with sorted v.
    pub fn restriction_bits(&self, u: &[usize], v: &[usize]) -> Result<Vec<u8>> {
        let total = 2 * self.n;
        if self.kind != LiftKind::AnyOrder {
            return Err(Error::OutOfRange(
                "restrictions exist for the any-order instance".into(),
            ));
        }
        let mut seen = vec![false; total];
        for &i in u.iter().chain(v) {
            if i >= total || std::mem::replace(&mut seen[i], true) {
                return Err(Error::OutOfRange(format!(
                    "({u:?}, {v:?}) is not a partition of {total} variables"
                )));
            }
        }
        if u.len() != self.n || v.len() != self.n {
            return Err(Error::OutOfRange("partition is not balanced".into()));
        }
        let (mut su, mut sv) = (u.to_vec(), v.to_vec());
        su.sort_unstable();
        sv.sort_unstable();
        let mut bits = vec![0u8; total * (total - 1) / 2];
        for (&a, &b) in su.iter().zip(&sv) {
            bits[pair_index(total, a.min(b), a.max(b))] = 1;
        }
        Ok(bits)
    }

    /// The instance with z = b_{u,v}, as a polynomial in the 2n x variables.
    pub fn specialize(&self, u: &[usize], v: &[usize]) -> Result<Poly> {
        let bits = self.restriction_bits(u, v)?;
        let f = self.polynomial();
        let field = f.field();
        let total = 2 * self.n;
        let assignments: BTreeMap<usize, Poly> = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let c = if b == 1 { field.one() } else { field.zero() };
                (total + i, Poly::constant(field, f.nvars(), c))
            })
            .collect();
        let substituted = f.substitute(&assignments)?;
        let map: Vec<usize> = (0..f.nvars()).map(|i| if i < total { i } else { 0 }).collect();
        substituted.rename_vars(&map, total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbounds::{eval_dimension, inverse_on_cube, Budget};
    use crate::poly::Monomial;

    #[test]
    fn identity_partition_restriction() {
        let tower = Arc::new(FieldTower::new(2, 3).unwrap());
        let lifted = lifted_instance(LiftKind::AnyOrder, 2, &tower, 4).unwrap();
        let f = lifted.polynomial();
        let u = [0, 1];
        let v = [2, 3];
        let g = lifted.specialize(&u, &v).unwrap();
        let field = f.field();
        let alpha = |i: usize, j: usize| {
            let mut exps = vec![0u32; f.nvars()];
            exps[i] = 1;
            exps[j] = 1;
            exps[4 + pair_index(4, i, j)] = 1;
            f.coeff(&Monomial::from_exponents(&exps))
        };
        let mut expected = Poly::constant(field, 4, f.constant_term());
        for (a, b) in [(0, 2), (1, 3)] {
            expected = &expected + &(&Poly::var(field, 4, a) * &Poly::var(field, 4, b)).scale(&alpha(a, b));
        }
        assert_eq!(g, expected);
    }

    #[test]
    fn restriction_bits_have_n_ones() {
        let tower = Arc::new(FieldTower::new(2, 2).unwrap());
        let lifted = lifted_instance(LiftKind::AnyOrder, 3, &tower, 0).unwrap();
        let parts = balanced_partitions(3);
        assert_eq!(parts.len(), 10);
        for (u, v) in parts {
            let bits = lifted.restriction_bits(&u, &v).unwrap();
            assert_eq!(bits.iter().filter(|&&b| b == 1).count(), 3);
            assert!(bits.iter().all(|&b| b <= 1));
        }
    }

    #[test]
    fn fixed_order_eval_dimension() {
        let tower = Arc::new(FieldTower::new(2, 8).unwrap());
        let lifted = lifted_instance(LiftKind::FixedOrder, 3, &tower, 1).unwrap();
        let inv = inverse_on_cube(lifted.polynomial(), &Budget::default()).unwrap();
        assert_eq!(eval_dimension(&inv, &lifted.x_vars(), &lifted.y_vars()), 8);
    }
}
