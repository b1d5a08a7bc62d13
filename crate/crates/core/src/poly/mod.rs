//! Sparse multivariate polynomials over a finite field.

mod monomial;
mod ops;
mod text;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

pub use monomial::{Monomial, MonomialOrder};
pub use ops::{cube_interpolate, cube_point, AxiomKind, QuotientDecomposition};
pub use text::{parse_poly, VarLayout};

/// A polynomial in `nvars` variables with coefficients in `field`.
///
/// Terms are kept in a map ordered by grlex with no explicit zeros, so two
/// polynomials are equal exactly when their maps are.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.field.spec() == other.field.spec() && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self.to_text(&VarLayout::x(self.nvars)))
    }
}

impl Poly {
    pub fn zero(field: &Arc<Field>, nvars: usize) -> Self {
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Arc<Field>, nvars: usize, c: FieldElem) -> Self {
        let mut p = Poly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &Arc<Field>, nvars: usize) -> Self {
        Poly::constant(field, nvars, field.one())
    }

    /// The variable with 0-based index `i`.
    pub fn var(field: &Arc<Field>, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Poly::monomial(field, Monomial::var(nvars, i), field.one())
    }

    pub fn monomial(field: &Arc<Field>, m: Monomial, c: FieldElem) -> Self {
        let mut p = Poly::zero(field, m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Collects terms, adding coefficients of repeated monomials.
    pub fn from_terms<I>(field: &Arc<Field>, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, FieldElem)>,
    {
        let mut p = Poly::zero(field, nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: m.nvars(),
                });
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Number of nonzero terms.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && self.field.is_one(c))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn individual_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.individual_degree() <= 1
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::LevelMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field, self.nvars));
        }
        let f = &*self.field;
        let mut acc: HashMap<Monomial, FieldElem> =
            HashMap::with_capacity(self.terms.len().saturating_mul(other.terms.len()).min(1 << 20));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = f.mul(c1, c2);
                let m = m1.mul(m2);
                match acc.get_mut(&m) {
                    Some(slot) => f.add_assign(slot, &prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Ok(Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field, self.nvars);
        }
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    /// Multiply by a single monomial.
    pub fn shift(&self, m: &Monomial) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut result = Poly::one(&self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Applies `g` to every coefficient, landing in `target`.
    pub fn map_coeffs<G>(&self, target: &Arc<Field>, mut g: G) -> Poly
    where
        G: FnMut(&FieldElem) -> FieldElem,
    {
        let mut out = Poly::zero(target, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &g(c));
        }
        out
    }

    /// Raises every coefficient to the p^j-th power, leaving monomials alone.
    pub fn frobenius_coeffs(&self, j: usize) -> Poly {
        let f = self.field.clone();
        self.map_coeffs(&f, |c| f.frobenius(c, j))
    }

    /// Re-embeds into a ring with more variables, keeping indices.
    pub fn extend_vars(&self, nvars: usize) -> Result<Poly> {
        if nvars < self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: nvars,
            });
        }
        let mut out = Poly::zero(&self.field, nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.extend(nvars), c.clone());
        }
        Ok(out)
    }

    /// Renames variable i to `map[i]` in a ring of `nvars` variables.
    pub fn rename_vars(&self, map: &[usize], nvars: usize) -> Result<Poly> {
        if map.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: map.len(),
            });
        }
        let mut out = Poly::zero(&self.field, nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; nvars];
            for (i, &e) in m.exponents().iter().enumerate() {
                let target = *map
                    .get(i)
                    .filter(|&&t| t < nvars)
                    .ok_or_else(|| Error::OutOfRange(format!("variable {i} maps outside {nvars} variables")))?;
                exps[target] += e;
            }
            out.add_term(Monomial::from_exponents(&exps), c);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let f = &*self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    term = f.mul(&term, &f.pow(x, e as u128));
                }
            }
            f.add_assign(&mut acc, &term);
        }
        Ok(acc)
    }

    /// Maximal term under `order`.
    pub fn leading_monomial(&self, order: MonomialOrder) -> Result<Monomial> {
        let lm = match order {
            MonomialOrder::Grlex => self.terms.keys().next_back().cloned(),
            MonomialOrder::Lex => self.terms.keys().max_by(|a, b| a.cmp_lex(b)).cloned(),
        };
        lm.ok_or(Error::ZeroPolynomial)
    }
}

impl Add for &Poly {
    type Output = Poly;

    /// Panics when the operands live in different rings; see [`Poly::checked_add`].
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(field: &Arc<Field>, n: usize, i: usize) -> Poly {
        Poly::var(field, n, i)
    }

    #[test]
    fn char_two_square_loses_cross_terms() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let s = &x(&f2, 2, 0) + &x(&f2, 2, 1);
        let sq = &s * &s;
        let expected = &x(&f2, 2, 0).pow(2) + &x(&f2, 2, 1).pow(2);
        assert_eq!(sq, expected);
    }

    #[test]
    fn evaluation_and_zero_product() {
        let f3 = Arc::new(Field::prime(3).unwrap());
        let f = &(&x(&f3, 2, 0) * &x(&f3, 2, 1)) + &Poly::one(&f3, 2);
        let v = f.eval(&[f3.one(), f3.one()]).unwrap();
        assert_eq!(v, f3.from_u64(2));
        assert!((&f * &Poly::zero(&f3, 2)).is_zero());
        assert_eq!(f.eval(&[f3.one()]), Err(Error::ArityMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let f3 = Arc::new(Field::prime(3).unwrap());
        let a = Poly::one(&f2, 1);
        assert_eq!(a.checked_add(&Poly::one(&f3, 1)), Err(Error::LevelMismatch));
        assert!(matches!(
            a.checked_mul(&Poly::one(&f2, 2)),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn leading_monomial_grlex() {
        let f = Arc::new(Field::prime(5).unwrap());
        let p = &(&x(&f, 3, 0) * &x(&f, 3, 1)) + &x(&f, 3, 2);
        assert_eq!(
            p.leading_monomial(MonomialOrder::Grlex).unwrap(),
            Monomial::from_exponents(&[1, 1, 0])
        );
        let single = x(&f, 3, 2);
        assert_eq!(
            single.leading_monomial(MonomialOrder::Grlex).unwrap(),
            Monomial::var(3, 2)
        );
        assert_eq!(
            Poly::zero(&f, 3).leading_monomial(MonomialOrder::Grlex),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn rename_and_extend() {
        let f = Arc::new(Field::prime(7).unwrap());
        let p = &x(&f, 2, 0) * &x(&f, 2, 1).pow(2);
        let r = p.rename_vars(&[2, 0], 3).unwrap();
        assert_eq!(r, &x(&f, 3, 2) * &x(&f, 3, 0).pow(2));
        assert_eq!(p.extend_vars(4).unwrap().nvars(), 4);
    }
}
