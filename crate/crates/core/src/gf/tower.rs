use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{Field, FieldElem, FieldSpec};
use super::unipoly;
use crate::error::{Error, Result};

/// Which field of the tower an object lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Base,
    Ext,
}

/// F_{p^k} inside F_{p^{2k}}, with the embedding fixed by the image of the
/// base generator.
#[derive(Debug, Clone)]
pub struct FieldTower {
    base: Arc<Field>,
    ext: Arc<Field>,
    // powers theta^0 .. theta^{k-1} of the generator image
    embed_table: Vec<FieldElem>,
}

impl FieldTower {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::DegenerateTower);
        }
        let base = FieldSpec::search(p, k)?;
        let ext = FieldSpec::search(p, 2 * k)?;
        Self::from_specs(base, ext)
    }

    /// Builds the tower for explicit moduli. The generator image is the least
    /// root (in element index order) of the base modulus inside the extension.
    pub fn from_specs(base: FieldSpec, ext: FieldSpec) -> Result<Self> {
        if base.p != ext.p || ext.k != 2 * base.k {
            return Err(Error::InvalidModulus(format!(
                "{ext} is not a quadratic extension of {base}"
            )));
        }
        let base = Field::new(base);
        let ext = Field::new(ext);
        let modulus: Vec<FieldElem> = base.spec().modulus.iter().map(|&c| ext.from_u64(c)).collect();
        let roots = if base.degree() == 1 {
            vec![ext.neg(&modulus[0])]
        } else {
            unipoly::split_roots(&ext, &modulus)
                .ok_or_else(|| Error::Internal("could not split the base modulus in the extension".into()))?
        };
        let theta = roots
            .into_iter()
            .min_by(|a, b| ext.cmp_elems(a, b))
            .ok_or_else(|| Error::Internal("base modulus has no root in the extension".into()))?;
        debug_assert!(ext.is_zero(&unipoly::eval(&ext, &modulus, &theta)));
        let mut embed_table = Vec::with_capacity(base.degree());
        let mut pw = ext.one();
        for _ in 0..base.degree() {
            embed_table.push(pw.clone());
            pw = ext.mul(&pw, &theta);
        }
        Ok(FieldTower {
            base: Arc::new(base),
            ext: Arc::new(ext),
            embed_table,
        })
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<Field> {
        &self.ext
    }

    pub fn field(&self, level: Level) -> &Arc<Field> {
        match level {
            Level::Base => &self.base,
            Level::Ext => &self.ext,
        }
    }

    pub fn p(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn k(&self) -> usize {
        self.base.degree()
    }

    /// Image of the base generator t.
    pub fn generator_image(&self) -> FieldElem {
        if self.k() == 1 {
            // F_p: the "generator" is the constant -m_0 itself
            self.embed(&self.base.generator())
        } else {
            self.embed_table[1].clone()
        }
    }

    pub fn embed(&self, a: &FieldElem) -> FieldElem {
        let mut out = self.ext.zero();
        for (c, pw) in a.coeffs().iter().zip(&self.embed_table) {
            if *c != 0 {
                let term = self.ext.mul(&self.ext.from_u64(*c), pw);
                self.ext.add_assign(&mut out, &term);
            }
        }
        out
    }

    /// Fixed points of the k-th Frobenius power are exactly the embedded base.
    pub fn is_in_subfield(&self, a: &FieldElem) -> bool {
        self.ext.frobenius(a, self.k()) == *a
    }

    /// Inverse of [`FieldTower::embed`] on its image.
    pub fn restrict(&self, a: &FieldElem) -> Option<FieldElem> {
        if !self.is_in_subfield(a) {
            return None;
        }
        // Solve sum_i c_i theta^i = a over F_p by elimination on the 2k x k system.
        let p = self.p();
        let k = self.k();
        let rows = self.ext.degree();
        let mut m: Vec<Vec<u64>> = (0..rows)
            .map(|r| {
                let mut row: Vec<u64> = self.embed_table.iter().map(|e| e.coeffs()[r]).collect();
                row.push(a.coeffs()[r]);
                row
            })
            .collect();
        let fp = Field::prime(p).ok()?;
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..k {
            let Some(r) = (pivot_row..rows).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(pivot_row, r);
            let inv = fp.inv(&fp.from_u64(m[pivot_row][col])).ok()?.coeffs()[0];
            for v in m[pivot_row].iter_mut() {
                *v = super::prime::mul_mod(*v, inv, p);
            }
            for r2 in 0..rows {
                if r2 != pivot_row && m[r2][col] != 0 {
                    let factor = m[r2][col];
                    for c in 0..=k {
                        let sub = super::prime::mul_mod(factor, m[pivot_row][c], p);
                        m[r2][c] = super::prime::sub_mod(m[r2][c], sub, p);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let mut coeffs = vec![0u64; k];
        for (r, &col) in pivots.iter().enumerate() {
            coeffs[col] = m[r][k];
        }
        self.base.from_coeffs(&coeffs).ok()
    }

    pub fn sample<R: Rng + ?Sized>(&self, level: Level, rng: &mut R) -> FieldElem {
        self.field(level).sample(rng)
    }

    /// Uniform element of the extension outside the embedded base, by rejection.
    pub fn sample_beta<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let b = self.ext.sample(rng);
            if !self.is_in_subfield(&b) {
                return b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_tower_rejected() {
        assert_eq!(FieldTower::new(2, 0).unwrap_err(), Error::DegenerateTower);
    }

    #[test]
    fn f2_inside_f4() {
        let tower = FieldTower::new(2, 1).unwrap();
        let ext = tower.ext();
        let t = ext.generator();
        assert!(!tower.is_in_subfield(&t));
        assert_eq!(tower.embed(&tower.base().zero()), ext.zero());
        assert_eq!(tower.embed(&tower.base().one()), ext.one());
        let t1 = ext.add(&t, &ext.one());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let b = tower.sample_beta(&mut rng);
            assert!(b == t || b == t1);
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        for (p, k) in [(2, 2), (2, 3), (3, 2), (5, 3), (2, 6), (7, 1)] {
            let tower = FieldTower::new(p, k).unwrap();
            let (base, ext) = (tower.base(), tower.ext());
            let mut rng = ChaCha8Rng::seed_from_u64(p * 100 + k as u64);
            for _ in 0..100 {
                let a = base.sample(&mut rng);
                let b = base.sample(&mut rng);
                let (ea, eb) = (tower.embed(&a), tower.embed(&b));
                assert_eq!(tower.embed(&base.add(&a, &b)), ext.add(&ea, &eb));
                assert_eq!(tower.embed(&base.mul(&a, &b)), ext.mul(&ea, &eb));
                assert!(tower.is_in_subfield(&ea));
                assert_eq!(tower.restrict(&ea), Some(a));
            }
        }
    }

    #[test]
    fn embedding_is_injective_on_small_base() {
        let tower = FieldTower::new(3, 2).unwrap();
        let images: std::collections::HashSet<FieldElem> =
            tower.base().elements().unwrap().map(|a| tower.embed(&a)).collect();
        assert_eq!(images.len(), 9);
    }

    #[test]
    fn subfield_count_matches_base_order() {
        let tower = FieldTower::new(2, 3).unwrap();
        let fixed = tower
            .ext()
            .elements()
            .unwrap()
            .filter(|a| tower.is_in_subfield(a))
            .count();
        assert_eq!(fixed, 8);
    }

    #[test]
    fn sampling_is_roughly_uniform() {
        // F_9 with 10^4 draws: every count within 5 sigma of 10^4 / 9
        let f = Field::with_degree(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = [0usize; 9];
        let draws = 10_000;
        for _ in 0..draws {
            counts[f.index(&f.sample(&mut rng)).unwrap() as usize] += 1;
        }
        let mean = draws as f64 / 9.0;
        let sigma = (draws as f64 * (1.0 / 9.0) * (8.0 / 9.0)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 5.0 * sigma, "{counts:?}");
        }
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2) / mean).sum();
        // 8 degrees of freedom; 26.1 is the 0.999 quantile
        assert!(chi2 < 26.1, "chi2 = {chi2}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn freshmans_dream_and_frobenius_multiplicative(seed in any::<u64>(), j in 0usize..6) {
            for (p, k) in [(2u64, 3usize), (3, 2), (5, 2)] {
                let tower = FieldTower::new(p, k).unwrap();
                let f = tower.ext();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = f.sample(&mut rng);
                let b = f.sample(&mut rng);
                let lhs = f.pow(&f.add(&a, &b), p as u128);
                let rhs = f.add(&f.pow(&a, p as u128), &f.pow(&b, p as u128));
                prop_assert_eq!(lhs, rhs);
                prop_assert_eq!(
                    f.frobenius(&f.mul(&a, &b), j),
                    f.mul(&f.frobenius(&a, j), &f.frobenius(&b, j))
                );
            }
        }
    }
}
