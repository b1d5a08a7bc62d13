use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Monomial, Poly};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

/// Which family of per-variable axioms to divide by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomKind {
    /// x_j^2 - x_j
    Boolean,
    /// x_j^p - x_j
    Fermat(u64),
}

impl AxiomKind {
    pub fn exponent(self) -> u32 {
        match self {
            AxiomKind::Boolean => 2,
            AxiomKind::Fermat(p) => p as u32,
        }
    }

    /// The axiom polynomial for variable `j`.
    pub fn axiom(self, field: &Arc<Field>, nvars: usize, j: usize) -> Poly {
        let x = Poly::var(field, nvars, j);
        &x.pow(self.exponent() as u64) - &x
    }
}

/// f = remainder + sum_j quotients[j] * (x_j^e - x_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientDecomposition {
    pub remainder: Poly,
    pub quotients: Vec<Poly>,
    pub kind: AxiomKind,
}

impl QuotientDecomposition {
    /// Re-expands the decomposition.
    pub fn reconstruct(&self) -> Poly {
        let f = self.remainder.field().clone();
        let n = self.remainder.nvars();
        let mut acc = self.remainder.clone();
        for (j, q) in self.quotients.iter().enumerate() {
            if !q.is_zero() {
                acc = &acc + &(q * &self.kind.axiom(&f, n, j));
            }
        }
        acc
    }
}

/// Cube point with index `idx`: coordinate i is bit i.
pub fn cube_point(field: &Field, nvars: usize, idx: u64) -> Vec<FieldElem> {
    (0..nvars)
        .map(|i| if (idx >> i) & 1 == 1 { field.one() } else { field.zero() })
        .collect()
}

/// The unique multilinear polynomial taking `values[a]` at cube point `a`
/// (bit i of `a` is x_{i+1}), by Möbius inversion over subsets.
pub fn cube_interpolate(field: &Arc<Field>, nvars: usize, values: &[FieldElem]) -> Result<Poly> {
    if nvars >= 64 || values.len() != 1usize << nvars {
        return Err(Error::OutOfRange(format!(
            "cube table has {} entries, expected 2^{nvars}",
            values.len()
        )));
    }
    let mut v = values.to_vec();
    for i in 0..nvars {
        let bit = 1usize << i;
        for mask in 0..v.len() {
            if mask & bit != 0 {
                let lower = v[mask ^ bit].clone();
                v[mask] = field.sub(&v[mask], &lower);
            }
        }
    }
    let mut out = Poly::zero(field, nvars);
    for (mask, c) in v.into_iter().enumerate() {
        if !c.is_zero() {
            out.terms.insert(Monomial::from_mask(nvars, mask as u64), c);
        }
    }
    Ok(out)
}

impl Poly {
    /// Replaces every positive exponent by 1.
    pub fn ml(&self) -> Poly {
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let reduced: Vec<u32> = m.exponents().iter().map(|&e| e.min(1)).collect();
            out.add_term(Monomial::from_exponents(&reduced), c);
        }
        out
    }

    /// Multilinearizes only the listed variables.
    pub fn ml_partial(&self, vars: &[usize]) -> Poly {
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut reduced = m.clone();
            for &v in vars {
                if reduced.exp(v) > 1 {
                    reduced.set_exp(v, 1);
                }
            }
            out.add_term(reduced, c);
        }
        out
    }

    /// Values on the Boolean cube, indexed as in [`cube_interpolate`].
    pub fn eval_on_cube(&self) -> Result<Vec<FieldElem>> {
        if self.nvars >= 32 {
            return Err(Error::BudgetExceeded {
                what: "cube dimension".into(),
                got: self.nvars,
                cap: 31,
            });
        }
        let size = 1usize << self.nvars;
        let mut v = vec![self.field.zero(); size];
        for (m, c) in &self.terms {
            let idx = m.support_mask() as usize;
            self.field.add_assign(&mut v[idx], c);
        }
        for i in 0..self.nvars {
            let bit = 1usize << i;
            for mask in 0..size {
                if mask & bit != 0 {
                    let lower = v[mask ^ bit].clone();
                    self.field.add_assign(&mut v[mask], &lower);
                }
            }
        }
        Ok(v)
    }

    /// Sequential division by x_1^e - x_1, then x_2^e - x_2, and so on.
    ///
    /// Since the monomials of the running remainder are exactly the partially
    /// reduced monomials of `self`, the division is carried out term by term:
    /// an exponent a >= e drops to the representative a' in {1..e-1} with
    /// a ≡ a' (mod e-1), and x^a - x^{a'} = sum_s x^{a-e-s(e-1)} (x^e - x).
    pub fn divide_by_axioms(&self, kind: AxiomKind) -> QuotientDecomposition {
        let e = kind.exponent();
        let n = self.nvars;
        let mut quotients: Vec<BTreeMap<Monomial, FieldElem>> = vec![BTreeMap::new(); n];
        let mut remainder = Poly::zero(&self.field, n);
        let f = &*self.field;
        let push = |map: &mut BTreeMap<Monomial, FieldElem>, m: Monomial, c: &FieldElem| {
            use std::collections::btree_map::Entry;
            match map.entry(m) {
                Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                Entry::Occupied(mut o) => {
                    let s = f.add(o.get(), c);
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        };
        for (m, c) in &self.terms {
            let mut cur = m.clone();
            for j in 0..n {
                let a = cur.exp(j);
                if a < e {
                    continue;
                }
                let reduced = (a - 1) % (e - 1) + 1;
                let steps = (a - reduced) / (e - 1);
                for s in 0..steps {
                    let mut q = cur.clone();
                    q.set_exp(j, a - e - s * (e - 1));
                    push(&mut quotients[j], q, c);
                }
                cur.set_exp(j, reduced);
            }
            remainder.add_term(cur, c);
        }
        QuotientDecomposition {
            remainder,
            quotients: quotients
                .into_iter()
                .map(|terms| Poly {
                    field: self.field.clone(),
                    nvars: n,
                    terms,
                })
                .collect(),
            kind,
        }
    }

    /// Reduces individual degrees below p using x^p = x; returns the reduced
    /// polynomial and the quotients G_j with f = reduced + sum_j G_j (x_j^p - x_j).
    pub fn inddeg_p(&self, p: u64) -> (Poly, Vec<Poly>) {
        let d = self.divide_by_axioms(AxiomKind::Fermat(p));
        (d.remainder, d.quotients)
    }

    /// Simultaneous substitution x_i -> images[i], all images in one target ring.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Err(Error::OutOfRange(
                "composition of a polynomial in zero variables needs a target ring".into(),
            ));
        };
        let target_n = first.nvars();
        for img in images {
            if img.nvars() != target_n {
                return Err(Error::ArityMismatch {
                    expected: target_n,
                    got: img.nvars(),
                });
            }
            if img.field().spec() != self.field.spec() {
                return Err(Error::LevelMismatch);
            }
        }
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|img| vec![Poly::one(&self.field, target_n), img.clone()])
            .collect();
        let mut out = Poly::zero(&self.field, target_n);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&self.field, target_n, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitutes the listed variables, leaving the rest in place. Images
    /// live in the same ring as `self`.
    pub fn substitute(&self, assignments: &BTreeMap<usize, Poly>) -> Result<Poly> {
        if assignments.is_empty() {
            return Ok(self.clone());
        }
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| match assignments.get(&i) {
                Some(p) => p.clone(),
                None => Poly::var(&self.field, self.nvars, i),
            })
            .collect();
        if let Some(&bad) = assignments.keys().find(|&&i| i >= self.nvars) {
            return Err(Error::OutOfRange(format!(
                "variable index {bad} beyond {} variables",
                self.nvars
            )));
        }
        for img in assignments.values() {
            if img.nvars() != self.nvars {
                return Err(Error::ArityMismatch {
                    expected: self.nvars,
                    got: img.nvars(),
                });
            }
        }
        self.compose(&images)
    }
}
