use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Admissible monomial orders. Variable 0 is the largest variable in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Total degree first, ties broken lexicographically.
    Grlex,
    Lex,
}

/// Exponent vector (mu_1, ..., mu_n).
///
/// `Ord` is graded lexicographic: higher total degree wins, then the larger
/// exponent in the lowest-indexed variable where the vectors differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// Multilinear monomial whose support is the set bits of `mask` (bit i is variable i).
    pub fn from_mask(nvars: usize, mask: u64) -> Self {
        Monomial((0..nvars).map(|i| ((mask >> i) & 1) as u32).collect())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.0[i] = e;
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Support as a bit mask; only meaningful for at most 64 variables.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub(crate) fn extend(&self, nvars: usize) -> Monomial {
        let mut v = self.0.clone();
        v.resize(nvars, 0);
        Monomial(v)
    }

    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_prefers_degree_then_earlier_variables() {
        let x1x2 = Monomial::from_exponents(&[1, 1, 0]);
        let x3 = Monomial::from_exponents(&[0, 0, 1]);
        let x1 = Monomial::from_exponents(&[1, 0, 0]);
        let x3sq = Monomial::from_exponents(&[0, 0, 2]);
        assert!(x1x2 > x3);
        assert!(x1 > x3);
        assert!(x1x2 > x3sq);
        assert_eq!(x3sq.cmp_lex(&x1), Ordering::Less);
    }

    #[test]
    fn mask_round_trip() {
        let m = Monomial::from_mask(5, 0b10110);
        assert_eq!(m.exponents(), &[0, 1, 1, 0, 1]);
        assert_eq!(m.support_mask(), 0b10110);
        assert_eq!(m.support(), vec![1, 2, 4]);
    }
}
