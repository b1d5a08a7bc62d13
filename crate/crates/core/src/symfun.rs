//! Elementary symmetric polynomials and what they compute on the Boolean cube.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::linalg::{self, Matrix};
use crate::poly::{AxiomKind, Monomial, Poly};

/// e_d(x_1..x_n), built from the subsets of size d.
pub fn elem_sym(field: &Arc<Field>, n: usize, d: usize) -> Result<Poly> {
    if d > n {
        return Err(Error::OutOfRange(format!("e_{d} in {n} variables")));
    }
    let mut out = Poly::zero(field, n);
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        let mut exps = vec![0u32; n];
        for &i in &subset {
            exps[i] = 1;
        }
        out.add_term(Monomial::from_exponents(&exps), &field.one());
        // next d-subset in lexicographic order
        let Some(pos) = (0..d).rev().find(|&i| subset[i] < n - d + i) else {
            break;
        };
        subset[pos] += 1;
        for i in pos + 1..d {
            subset[i] = subset[i - 1] + 1;
        }
    }
    Ok(out)
}

/// C(a, b) mod p as the product of binomials of base-p digits.
pub fn lucas_binom(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    while b > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        acc = acc * small_binom_mod(ai, bi, p) as u128 % p as u128;
        a /= p;
        b /= p;
    }
    acc as u64
}

// C(a, b) mod p for 0 <= b <= a < p, where every factor is invertible.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let pp = p as u128;
    for i in 0..b {
        num = num * ((a - i) as u128) % pp;
        den = den * ((i + 1) as u128) % pp;
    }
    let den_inv = crate::gf::prime::inv_mod(den as u64, p).expect("factorial below p is a unit");
    (num * den_inv as u128 % pp) as u64
}

/// C(w, d) as an element of the prime subfield.
pub fn binom_in(field: &Field, w: usize, d: usize) -> FieldElem {
    field.from_u64(lucas_binom(w as u64, d as u64, field.characteristic()))
}

/// A multilinear symmetric polynomial written as sum_d lambda_d e_d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemSymExpansion {
    field: Arc<Field>,
    lambdas: Vec<FieldElem>,
}

impl ElemSymExpansion {
    pub fn new(field: &Arc<Field>, lambdas: Vec<FieldElem>) -> Self {
        ElemSymExpansion {
            field: field.clone(),
            lambdas,
        }
    }

    /// e_d alone, in n variables.
    pub fn unit(field: &Arc<Field>, n: usize, d: usize) -> Self {
        let mut lambdas = vec![field.zero(); n + 1];
        lambdas[d] = field.one();
        ElemSymExpansion::new(field, lambdas)
    }

    pub fn n(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn lambdas(&self) -> &[FieldElem] {
        &self.lambdas
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// sum_d lambda_d C(w, d).
    pub fn value_at_weight(&self, w: usize) -> FieldElem {
        let f = &*self.field;
        self.lambdas
            .iter()
            .enumerate()
            .take(w + 1)
            .fold(f.zero(), |acc, (d, l)| f.add(&acc, &f.mul(l, &binom_in(f, w, d))))
    }

    pub fn weight_table(&self) -> Vec<FieldElem> {
        (0..=self.n()).map(|w| self.value_at_weight(w)).collect()
    }

    /// Inverts the weight table by the triangular system
    /// lambda_w = v(w) - sum_{i<w} lambda_i C(w, i).
    pub fn from_weight_table(field: &Arc<Field>, values: &[FieldElem]) -> Self {
        let mut lambdas: Vec<FieldElem> = Vec::with_capacity(values.len());
        for (w, v) in values.iter().enumerate() {
            let mut l = v.clone();
            for (i, li) in lambdas.iter().enumerate() {
                l = field.sub(&l, &field.mul(li, &binom_in(field, w, i)));
            }
            lambdas.push(l);
        }
        ElemSymExpansion::new(field, lambdas)
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let n = self.n();
        let mut out = Poly::zero(&self.field, n);
        for (d, l) in self.lambdas.iter().enumerate() {
            if !l.is_zero() {
                out = &out + &elem_sym(&self.field, n, d)?.scale(l);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ElemSymExpansion) -> ElemSymExpansion {
        let f = &self.field;
        ElemSymExpansion::new(
            f,
            self.lambdas
                .iter()
                .zip(&other.lambdas)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, c: &FieldElem) -> ElemSymExpansion {
        let f = &self.field;
        ElemSymExpansion::new(f, self.lambdas.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Expansion of ml[self * other], through the product of weight tables.
    pub fn ml_product(&self, other: &ElemSymExpansion) -> ElemSymExpansion {
        let f = &self.field;
        let table: Vec<FieldElem> = self
            .weight_table()
            .iter()
            .zip(other.weight_table())
            .map(|(a, b)| f.mul(a, &b))
            .collect();
        ElemSymExpansion::from_weight_table(f, &table)
    }
}

/// Values of `f` per Hamming weight, failing when two points of equal weight disagree.
pub fn weight_table(f: &Poly) -> Result<Vec<FieldElem>> {
    let n = f.nvars();
    let values = f.eval_on_cube()?;
    let mut table: Vec<Option<FieldElem>> = vec![None; n + 1];
    for (idx, v) in values.into_iter().enumerate() {
        let w = idx.count_ones() as usize;
        match &table[w] {
            None => table[w] = Some(v),
            Some(prev) if *prev != v => return Err(Error::NotSymmetric { weight: w }),
            Some(_) => {}
        }
    }
    Ok(table.into_iter().map(|v| v.expect("every weight occurs")).collect())
}

/// The unique sum_d lambda_d e_d agreeing with `f` on the cube.
pub fn sym_to_elem_basis(f: &Poly) -> Result<ElemSymExpansion> {
    let table = weight_table(f)?;
    Ok(ElemSymExpansion::from_weight_table(f.field(), &table))
}

/// e_k(x) = sum_i coeffs[k][i] prod_j (1 + nodes[i] x_j).
#[derive(Debug, Clone)]
pub struct BenOrForm {
    field: Arc<Field>,
    pub nodes: Vec<FieldElem>,
    pub coeffs: Vec<Vec<FieldElem>>,
}

/// Interpolation at the n+1 elements of least index. Expanding
/// prod_j (1 + g x_j) = sum_k g^k e_k gives a Vandermonde system whose
/// inverse holds the coefficients.
pub fn ben_or_coeffs(field: &Arc<Field>, n: usize) -> Result<BenOrForm> {
    if field.order().is_some_and(|q| q <= n as u128) {
        return Err(Error::FieldTooSmall {
            size: field.order_string(),
            needed: n,
        });
    }
    let nodes: Vec<FieldElem> = (0..=n as u128).map(|i| field.from_index(i)).collect();
    // V[i][k] = nodes[i]^k, so P = V e and e = V^{-1} P
    let v = Matrix::from_rows(
        field,
        nodes
            .iter()
            .map(|g| (0..=n).map(|k| field.pow(g, k as u128)).collect())
            .collect(),
    );
    let mut inverse_cols = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut unit = vec![field.zero(); n + 1];
        unit[i] = field.one();
        let col = linalg::solve(&v, &unit)
            .ok_or_else(|| Error::Internal("Vandermonde matrix on distinct nodes is singular".into()))?;
        inverse_cols.push(col);
    }
    let coeffs = (0..=n)
        .map(|k| (0..=n).map(|i| inverse_cols[i][k].clone()).collect())
        .collect();
    Ok(BenOrForm {
        field: field.clone(),
        nodes,
        coeffs,
    })
}

impl BenOrForm {
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Symbolic expansion of row k.
    pub fn expand(&self, k: usize) -> Poly {
        let f = &self.field;
        let n = self.n();
        let mut out = Poly::zero(f, n);
        for (g, c) in self.nodes.iter().zip(&self.coeffs[k]) {
            if c.is_zero() {
                continue;
            }
            let mut prod = Poly::constant(f, n, c.clone());
            for j in 0..n {
                let factor = &Poly::one(f, n) + &Poly::var(f, n, j).scale(g);
                prod = &prod * &factor;
            }
            out = &out + &prod;
        }
        out
    }
}

/// Number of base-p digits of n, floor(log_p n) + 1 (and 1 for n = 0).
pub fn digit_count(n: usize, p: u64) -> usize {
    let mut r = 1;
    let mut x = n as u128 / p as u128;
    while x > 0 {
        r += 1;
        x /= p as u128;
    }
    r
}

fn digits(mut t: usize, p: u64, r: usize) -> Vec<u64> {
    (0..r)
        .map(|_| {
            let d = (t as u64) % p;
            t = (t as u64 / p) as usize;
            d
        })
        .collect()
}

/// S(z) = (1/d!) prod_{j<d} (z - j) in variable `var` of an r-variable ring.
fn falling_binomial(field: &Arc<Field>, r: usize, var: usize, d: u64) -> Poly {
    let mut out = Poly::one(field, r);
    let mut fact = field.one();
    for j in 0..d {
        let factor = &Poly::var(field, r, var) - &Poly::constant(field, r, field.from_u64(j));
        out = &out * &factor;
        fact = field.mul(&fact, &field.from_u64(j + 1));
    }
    out.scale(&field.inv(&fact).expect("d < p so d! is a unit"))
}

/// e_1, e_p, ..., e_{p^{r-1}} in n variables.
pub fn ehat(field: &Arc<Field>, n: usize) -> Result<Vec<Poly>> {
    let p = field.characteristic();
    let r = digit_count(n, p);
    (0..r).map(|i| elem_sym(field, n, (p as usize).pow(i as u32))).collect()
}

/// A symmetric function of n bits as a polynomial F(y_1..y_r) with
/// f(a) = F(e_1(a), e_p(a), ..., e_{p^{r-1}}(a)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedSymmetric {
    pub n: usize,
    pub r: usize,
    pub poly: Poly,
}

impl CompressedSymmetric {
    /// F at the point (e_{p^i}(a))_i for a cube point of weight w.
    pub fn value_at_weight(&self, w: usize) -> Result<FieldElem> {
        let f = self.poly.field();
        let p = f.characteristic();
        let point: Vec<FieldElem> = (0..self.r)
            .map(|i| binom_in(f, w, (p as usize).pow(i as u32)))
            .collect();
        self.poly.eval(&point)
    }
}

/// Builds F = sum_d lambda_d prod_i S_{d_i}(y_i) from the elementary expansion,
/// d_i the base-p digits of d, then reduces individual degrees below p.
pub fn compress_char_p(f: &Poly) -> Result<CompressedSymmetric> {
    let expansion = sym_to_elem_basis(f)?;
    compress_expansion(&expansion)
}

pub fn compress_expansion(expansion: &ElemSymExpansion) -> Result<CompressedSymmetric> {
    let field = expansion.field();
    let p = field.characteristic();
    let n = expansion.n();
    let r = digit_count(n, p);
    let mut out = Poly::zero(field, r);
    for (d, l) in expansion.lambdas().iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        let mut term = Poly::constant(field, r, l.clone());
        for (i, di) in digits(d, p, r).into_iter().enumerate() {
            if di > 0 {
                term = &term * &falling_binomial(field, r, i, di);
            }
        }
        out = &out + &term;
    }
    let (reduced, _) = out.inddeg_p(p);
    Ok(CompressedSymmetric { n, r, poly: reduced })
}

/// Q_t(y) = prod_i S_{t_i}(y_i), defined for n < t <= p^r - 1.
pub fn qt_poly(field: &Arc<Field>, n: usize, t: usize) -> Result<Poly> {
    let p = field.characteristic();
    let r = digit_count(n, p);
    let top = (p as u128).checked_pow(r as u32).map(|q| q - 1);
    if t <= n || top.is_some_and(|top| t as u128 > top) {
        return Err(Error::OutOfRange(format!(
            "Q_t needs {n} < t <= p^{r} - 1, got t = {t}"
        )));
    }
    let mut out = Poly::one(field, r);
    for (i, ti) in digits(t, p, r).into_iter().enumerate() {
        if ti > 0 {
            out = &out * &falling_binomial(field, r, i, ti);
        }
    }
    Ok(out)
}

/// ml[prod e_alpha] as an elementary expansion, plus quotients R_j with
/// prod e_alpha = ml[prod e_alpha] + sum_j R_j (x_j^2 - x_j).
#[derive(Debug, Clone)]
pub struct MlProduct {
    pub alphas: Vec<usize>,
    pub expansion: ElemSymExpansion,
    pub multilinear: Poly,
    pub quotients: Vec<Poly>,
}

impl MlProduct {
    /// prod e_alpha - ml - sum_j R_j (x_j^2 - x_j), expanded.
    pub fn residual(&self) -> Result<Poly> {
        let f = self.multilinear.field();
        let n = self.multilinear.nvars();
        let mut product = Poly::one(f, n);
        for &a in &self.alphas {
            product = &product * &elem_sym(f, n, a)?;
        }
        let mut rhs = self.multilinear.clone();
        for (j, r) in self.quotients.iter().enumerate() {
            rhs = &rhs + &(r * &AxiomKind::Boolean.axiom(f, n, j));
        }
        Ok(&product - &rhs)
    }
}

/// Pairwise c_{alpha,beta}^{(i)}: the expansion of ml[e_alpha e_beta], from
/// its weight values C(w, alpha) C(w, beta) by the triangular solve.
pub fn pairwise_coeffs(field: &Arc<Field>, n: usize, alpha: usize, beta: usize) -> ElemSymExpansion {
    let table: Vec<FieldElem> = (0..=n)
        .map(|w| field.mul(&binom_in(field, w, alpha), &binom_in(field, w, beta)))
        .collect();
    ElemSymExpansion::from_weight_table(field, &table)
}

/// Folds the sorted degree multiset left to right: with M = ml[prod of the
/// first k-1 factors] and division M e_{alpha_k} = M' + sum_j R'_j (x_j^2 - x_j),
/// the quotients update as R_j <- R_j e_{alpha_k} + R'_j.
pub fn ml_prod_elem(field: &Arc<Field>, n: usize, alphas: &[usize]) -> Result<MlProduct> {
    if let Some(&bad) = alphas.iter().find(|&&a| a > n) {
        return Err(Error::OutOfRange(format!("e_{bad} in {n} variables")));
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_unstable();
    let Some((&first, rest)) = sorted.split_first() else {
        return Ok(MlProduct {
            alphas: sorted,
            expansion: ElemSymExpansion::unit(field, n, 0),
            multilinear: Poly::one(field, n),
            quotients: vec![Poly::zero(field, n); n],
        });
    };
    let mut expansion = ElemSymExpansion::unit(field, n, first);
    let mut current = elem_sym(field, n, first)?;
    let mut quotients = vec![Poly::zero(field, n); n];
    for &a in rest {
        let e_a = elem_sym(field, n, a)?;
        let d = (&current * &e_a).divide_by_axioms(AxiomKind::Boolean);
        for (r, r_new) in quotients.iter_mut().zip(&d.quotients) {
            *r = &(&*r * &e_a) + r_new;
        }
        current = d.remainder;
        let mut next = ElemSymExpansion::new(field, vec![field.zero(); n + 1]);
        for (dd, l) in expansion.lambdas().iter().enumerate() {
            if !l.is_zero() {
                next = next.add(&pairwise_coeffs(field, n, dd, a).scale(l));
            }
        }
        expansion = next;
    }
    Ok(MlProduct {
        alphas: sorted,
        expansion,
        multilinear: current,
        quotients,
    })
}

/// ElemSymExpansion serializes as its lambda vector of element strings.
impl Serialize for ElemSymExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.lambdas.iter().map(|l| self.field.format_elem(l)).collect();
        v.serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct CompressedText {
    r: usize,
    poly: String,
}

impl CompressedSymmetric {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CompressedText {
            r: self.r,
            poly: self.poly.to_text(&crate::poly::VarLayout::y(self.r)),
        })
        .expect("plain struct serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Arc<Field> {
        Arc::new(Field::prime(p).unwrap())
    }

    fn binom_exact(a: u64, b: u64) -> u128 {
        if b > a {
            return 0;
        }
        let b = b.min(a - b);
        let mut acc: u128 = 1;
        for i in 0..b {
            acc = acc * (a - i) as u128 / (i + 1) as u128;
        }
        acc
    }

    fn pascal_mod(size: usize, p: u64) -> Vec<Vec<u64>> {
        let mut t = vec![vec![0u64; size + 1]; size + 1];
        for a in 0..=size {
            t[a][0] = 1 % p;
            for b in 1..=a {
                t[a][b] = (t[a - 1][b - 1] + t[a - 1][b]) % p;
            }
        }
        t
    }

    #[test]
    fn elem_sym_basics() {
        let f = fp(5);
        assert!(elem_sym(&f, 4, 0).unwrap().is_one());
        assert_eq!(
            elem_sym(&f, 3, 3).unwrap(),
            Poly::monomial(&f, Monomial::from_exponents(&[1, 1, 1]), f.one())
        );
        let e2 = elem_sym(&f, 3, 2).unwrap();
        let x = |i| Poly::var(&f, 3, i);
        assert_eq!(e2, &(&(&x(0) * &x(1)) + &(&x(0) * &x(2))) + &(&x(1) * &x(2)));
        for n in 0..=12 {
            for d in 0..=n {
                assert_eq!(
                    elem_sym(&f, n, d).unwrap().sparsity() as u128,
                    binom_exact(n as u64, d as u64)
                );
            }
        }
        assert!(elem_sym(&f, 2, 3).is_err());
    }

    #[test]
    fn elem_sym_value_is_binomial_of_weight() {
        for p in [2, 3, 5] {
            let f = fp(p);
            for n in 0..=10usize {
                for d in 0..=n {
                    let vals = elem_sym(&f, n, d).unwrap().eval_on_cube().unwrap();
                    for (idx, v) in vals.iter().enumerate() {
                        let w = idx.count_ones() as u64;
                        assert_eq!(*v, f.from_u64((binom_exact(w, d as u64) % p as u128) as u64));
                    }
                }
            }
        }
    }

    #[test]
    fn lucas_examples_and_grid() {
        assert_eq!(lucas_binom(5, 2, 2), 0);
        assert_eq!(lucas_binom(17, 0, 7), 1);
        for p in [2u64, 3, 5, 7, 11, 13, 199] {
            let table = pascal_mod(200, p);
            for a in 0..=200u64 {
                for b in 0..=200u64 {
                    let expected = table[a as usize][b as usize];
                    assert_eq!(lucas_binom(a, b, p), expected, "C({a},{b}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn ben_or_identity_is_polynomial() {
        for (p, k) in [(7u64, 1usize), (2, 3), (3, 2)] {
            let f = Arc::new(Field::with_degree(p, k).unwrap());
            for n in 1..=6 {
                if f.order().unwrap() <= n as u128 {
                    assert!(matches!(ben_or_coeffs(&f, n), Err(Error::FieldTooSmall { .. })));
                    continue;
                }
                let form = ben_or_coeffs(&f, n).unwrap();
                for kk in 0..=n {
                    assert_eq!(form.expand(kk), elem_sym(&f, n, kk).unwrap(), "n={n} k={kk}");
                }
            }
        }
    }

    #[test]
    fn ben_or_two_by_two() {
        let f = fp(5);
        let form = ben_or_coeffs(&f, 1).unwrap();
        assert_eq!(form.nodes, vec![f.zero(), f.one()]);
        // P_0 = 1, P_1 = 1 + x: e_1 = P_1 - P_0
        assert_eq!(form.coeffs[1], vec![f.from_i64(-1), f.one()]);
        assert!(form.expand(0).is_one());
        assert!(matches!(ben_or_coeffs(&fp(2), 2), Err(Error::FieldTooSmall { .. })));
    }

    #[test]
    fn basis_change_examples() {
        let f = fp(3);
        let x = |i| Poly::var(&f, 2, i);
        let g = &(&(&x(0) * &x(1)) + &x(0)) + &x(1);
        let e = sym_to_elem_basis(&g).unwrap();
        assert_eq!(e.lambdas(), &[f.zero(), f.one(), f.one()]);
        let one = sym_to_elem_basis(&Poly::one(&f, 3)).unwrap();
        assert_eq!(one.lambdas(), &[f.one(), f.zero(), f.zero(), f.zero()]);
        assert_eq!(sym_to_elem_basis(&x(0)), Err(Error::NotSymmetric { weight: 1 }));
    }

    #[test]
    fn compression_examples() {
        // p = 2: e_d is the product of the y_i selected by the bits of d
        let f = fp(2);
        let n = 7;
        for d in 0..=n {
            let c = compress_char_p(&elem_sym(&f, n, d).unwrap()).unwrap();
            let mut expected = Poly::one(&f, c.r);
            for i in 0..c.r {
                if (d >> i) & 1 == 1 {
                    expected = &expected * &Poly::var(&f, c.r, i);
                }
            }
            assert_eq!(c.poly, expected, "d={d}");
        }
        for p in [2, 3, 5] {
            let f = fp(p);
            let c = compress_char_p(&elem_sym(&f, 6, 1).unwrap()).unwrap();
            assert_eq!(c.poly, Poly::var(&f, c.r, 0));
        }
        // n = 5, p = 3, e_2: F(e_1, e_3) agrees with C(|a|, 2) mod 3 at all 32 points
        let f = fp(3);
        let c = compress_char_p(&elem_sym(&f, 5, 2).unwrap()).unwrap();
        assert_eq!(c.r, 2);
        let e = ehat(&f, 5).unwrap();
        for idx in 0..32u64 {
            let pt = crate::poly::cube_point(&f, 5, idx);
            let y: Vec<FieldElem> = e.iter().map(|ei| ei.eval(&pt).unwrap()).collect();
            assert!(y.iter().all(|v| f.is_prime_subfield(v)));
            let w = idx.count_ones() as u64;
            assert_eq!(c.poly.eval(&y).unwrap(), f.from_u64(lucas_binom(w, 2, 3)));
        }
    }

    #[test]
    fn qt_examples() {
        let f = fp(2);
        let q3 = qt_poly(&f, 2, 3).unwrap();
        assert_eq!(q3, &Poly::var(&f, 2, 0) * &Poly::var(&f, 2, 1));
        let f3 = fp(3);
        let n = 4; // r = 2, t ranges over 5..=8
        for t in 5..=8 {
            let q = qt_poly(&f3, n, t).unwrap();
            assert!(q.individual_degree() <= 2);
            for b0 in 0..3u64 {
                for b1 in 0..3u64 {
                    let v = q.eval(&[f3.from_u64(b0), f3.from_u64(b1)]).unwrap();
                    let expected = lucas_binom(b0, (t % 3) as u64, 3) * lucas_binom(b1, (t / 3) as u64, 3) % 3;
                    assert_eq!(v, f3.from_u64(expected));
                }
            }
            let own = q
                .eval(&[f3.from_u64((t % 3) as u64), f3.from_u64((t / 3) as u64)])
                .unwrap();
            assert!(f3.is_one(&own));
        }
        assert!(qt_poly(&f3, 4, 4).is_err());
        assert!(qt_poly(&f3, 4, 9).is_err());
    }

    #[test]
    fn ml_prod_examples() {
        let f = fp(5);
        let single = ml_prod_elem(&f, 3, &[2]).unwrap();
        assert_eq!(single.multilinear, elem_sym(&f, 3, 2).unwrap());
        assert!(single.quotients.iter().all(Poly::is_zero));
        let sq = ml_prod_elem(&f, 2, &[1, 1]).unwrap();
        assert_eq!(sq.expansion.lambdas(), &[f.zero(), f.one(), f.from_u64(2)]);
        assert!(sq.residual().unwrap().is_zero());
        let f3 = fp(3);
        let m = ml_prod_elem(&f3, 4, &[3, 1, 3]).unwrap();
        assert!(m.residual().unwrap().is_zero());
        assert_eq!(m.expansion.to_poly().unwrap(), m.multilinear);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn expansion_round_trip(seed in any::<u64>(), n in 0usize..=8, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let f = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = ElemSymExpansion::new(&f, (0..=n).map(|_| f.sample(&mut rng)).collect());
            let poly = e.to_poly().unwrap();
            prop_assert_eq!(sym_to_elem_basis(&poly).unwrap(), e.clone());
            let c = compress_expansion(&e).unwrap();
            prop_assert!(c.poly.individual_degree() < p as u32);
            let vals = poly.eval_on_cube().unwrap();
            for (idx, v) in vals.iter().enumerate() {
                prop_assert_eq!(&c.value_at_weight(idx.count_ones() as usize).unwrap(), v);
            }
        }

        #[test]
        fn ml_prod_certificates_re_expand(seed in any::<u64>(), n in 1usize..=5) {
            use rand::Rng;
            let f = fp(3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alphas: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..=n)).collect();
            let m = ml_prod_elem(&f, n, &alphas).unwrap();
            prop_assert!(m.residual().unwrap().is_zero());
            prop_assert_eq!(m.expansion.to_poly().unwrap(), m.multilinear);
        }
    }
}
