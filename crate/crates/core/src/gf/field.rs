use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::prime::{self, add_mod, inv_mod, is_irreducible, is_prime, mul_mod, neg_mod, sub_mod};
use crate::error::{Error, Result};

/// Parameters of F_{p^k} = F_p[t]/(modulus).
///
/// `modulus` holds k+1 coefficients, constant term first, and is monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    /// Validates primality of `p` and that `modulus` is monic irreducible of degree `k`.
    pub fn new(p: u64, k: usize, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        if modulus.len() != k + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient not reduced mod p".into()));
        }
        if modulus[k] != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        Ok(FieldSpec { p, k, modulus })
    }

    /// First monic irreducible of degree `k` when candidates are enumerated
    /// by the integer c_0 + c_1 p + ... + c_{k-1} p^{k-1}.
    pub fn search(p: u64, k: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let mut digits = vec![0u64; k];
        loop {
            let mut candidate = digits.clone();
            candidate.push(1);
            if is_irreducible(&candidate, p) {
                return Ok(FieldSpec {
                    p,
                    k,
                    modulus: candidate,
                });
            }
            // increment the little-endian base-p counter
            let mut i = 0;
            loop {
                if i == k {
                    return Err(Error::Internal(format!("no irreducible of degree {k} over F_{p}")));
                }
                digits[i] += 1;
                if digits[i] == p {
                    digits[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// p^k when it fits in a u128.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.k as u32)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}){{modulus=", self.p, self.k)?;
        for (i, c) in self.modulus.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::parse(1, 1, format!("field spec '{s}': {msg}"));
        let s = s.trim();
        let rest = s.strip_prefix("GF(").ok_or_else(|| bad("expected 'GF('"))?;
        let (pk, rest) = rest.split_once(')').ok_or_else(|| bad("expected ')'"))?;
        let (p, k) = pk.split_once('^').ok_or_else(|| bad("expected 'p^k'"))?;
        let p: u64 = p.trim().parse().map_err(|_| bad("bad characteristic"))?;
        let k: usize = k.trim().parse().map_err(|_| bad("bad degree"))?;
        let body = rest
            .trim()
            .strip_prefix("{modulus=")
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| bad("expected '{modulus=...}'"))?;
        let modulus = body
            .split(',')
            .map(|c| c.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("bad modulus coefficient"))?;
        FieldSpec::new(p, k, modulus)
    }
}

/// An element of F_{p^k} as its dense coefficient vector in the basis
/// 1, t, ..., t^{k-1}. Which field it belongs to is tracked by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub(crate) SmallVec<[u64; 8]>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// One level of the tower: F_{p^k} with its arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    spec: FieldSpec,
    // -modulus[0..k], used in the reduction loop
    neg_low: Vec<u64>,
    wide_accumulate: bool,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let p = spec.p;
        let neg_low = spec.modulus[..spec.k].iter().map(|&c| neg_mod(c, p)).collect();
        // k products below 2^120 each cannot overflow a u128 accumulator
        let wide_accumulate = p < (1u64 << 60) && spec.k < 256;
        Field {
            spec,
            neg_low,
            wide_accumulate,
        }
    }

    /// F_{p^k} with the deterministic modulus from [`FieldSpec::search`].
    pub fn with_degree(p: u64, k: usize) -> Result<Self> {
        Ok(Field::new(FieldSpec::search(p, k)?))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Field::with_degree(p, 1)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    pub fn degree(&self) -> usize {
        self.spec.k
    }

    pub fn order(&self) -> Option<u128> {
        self.spec.order()
    }

    /// Human-readable field size (exact when it fits in u128).
    pub fn order_string(&self) -> String {
        match self.order() {
            Some(q) => q.to_string(),
            None => format!("{}^{}", self.spec.p, self.spec.k),
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(SmallVec::from_elem(0, self.spec.k))
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    /// The image of an integer under Z -> F_p -> F_{p^k}.
    pub fn from_u64(&self, n: u64) -> FieldElem {
        let mut e = self.zero();
        e.0[0] = n % self.spec.p;
        e
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        let p = self.spec.p as i128;
        let r = (n as i128).rem_euclid(p) as u64;
        self.from_u64(r)
    }

    /// The generator t of F_p[t]/(modulus).
    pub fn generator(&self) -> FieldElem {
        let mut e = self.zero();
        if self.spec.k == 1 {
            e.0[0] = neg_mod(self.spec.modulus[0], self.spec.p);
        } else {
            e.0[1] = 1;
        }
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.spec.k {
            return Err(Error::OutOfRange(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.spec.k
            )));
        }
        let mut e = self.zero();
        for (slot, &c) in e.0.iter_mut().zip(coeffs) {
            *slot = c % self.spec.p;
        }
        Ok(e)
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime subfield (only c_0 may be nonzero).
    pub fn is_prime_subfield(&self, a: &FieldElem) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.spec.p;
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| add_mod(x, y, p)).collect())
    }

    pub fn add_assign(&self, a: &mut FieldElem, b: &FieldElem) {
        let p = self.spec.p;
        for (x, &y) in a.0.iter_mut().zip(&b.0) {
            *x = add_mod(*x, y, p);
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.spec.p;
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| sub_mod(x, y, p)).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.spec.p;
        FieldElem(a.0.iter().map(|&x| neg_mod(x, p)).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let k = self.spec.k;
        let p = self.spec.p;
        if k == 1 {
            return FieldElem(SmallVec::from_elem(mul_mod(a.0[0], b.0[0], p), 1));
        }
        let mut prod: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * k - 1);
        if self.wide_accumulate {
            for (s, slot) in prod.iter_mut().enumerate() {
                let lo = s.saturating_sub(k - 1);
                let hi = s.min(k - 1);
                let mut acc: u128 = 0;
                for i in lo..=hi {
                    acc += a.0[i] as u128 * b.0[s - i] as u128;
                }
                *slot = (acc % p as u128) as u64;
            }
        } else {
            for i in 0..k {
                if a.0[i] == 0 {
                    continue;
                }
                for j in 0..k {
                    prod[i + j] = add_mod(prod[i + j], mul_mod(a.0[i], b.0[j], p), p);
                }
            }
        }
        // t^k = -(m_0 + ... + m_{k-1} t^{k-1})
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let idx = top - k + j;
                prod[idx] = add_mod(prod[idx], mul_mod(c, self.neg_low[j], p), p);
            }
        }
        FieldElem(prod[..k].iter().copied().collect())
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in F_p[t].
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let p = self.spec.p;
        if self.spec.k == 1 {
            let v = inv_mod(a.0[0], p).ok_or(Error::ZeroInverse)?;
            return Ok(self.from_u64(v));
        }
        let mut r0: Vec<u64> = self.spec.modulus.clone();
        let mut r1: Vec<u64> = a.0.to_vec();
        trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while r1.len() > 1 {
            let (q, r) = divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r1 is a nonzero constant c; a * s1 = c mod modulus
        let c_inv = inv_mod(r1[0], p).ok_or(Error::ZeroInverse)?;
        let coeffs: Vec<u64> = s1.iter().map(|&c| mul_mod(c, c_inv, p)).collect();
        self.from_coeffs(&coeffs)
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        result
    }

    /// a^{p^j}, by j successive p-th powers.
    pub fn frobenius(&self, a: &FieldElem, j: usize) -> FieldElem {
        let p = self.spec.p as u128;
        let mut out = a.clone();
        for _ in 0..j {
            out = self.pow(&out, p);
        }
        out
    }

    /// Uniform element: each F_p coordinate drawn independently.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let p = self.spec.p;
        FieldElem((0..self.spec.k).map(|_| rng.gen_range(0..p)).collect())
    }

    /// Uniform nonzero element.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let e = self.sample(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// c_0 + c_1 p + ... as an integer, when it fits.
    pub fn index(&self, a: &FieldElem) -> Option<u128> {
        let p = self.spec.p as u128;
        let mut acc: u128 = 0;
        for &c in a.0.iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(c as u128)?;
        }
        Some(acc)
    }

    pub fn from_index(&self, mut idx: u128) -> FieldElem {
        let p = self.spec.p as u128;
        let mut e = self.zero();
        for slot in e.0.iter_mut() {
            *slot = (idx % p) as u64;
            idx /= p;
        }
        e
    }

    /// Total order matching [`Field::index`]: highest coefficient compared first.
    pub fn cmp_elems(&self, a: &FieldElem, b: &FieldElem) -> Ordering {
        a.0.iter().rev().cmp(b.0.iter().rev())
    }

    /// All elements in index order; only for fields small enough to enumerate.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElem> + '_> {
        let q = self
            .order()
            .filter(|&q| q <= 1 << 24)
            .ok_or_else(|| Error::BudgetExceeded {
                what: "field enumeration".into(),
                got: usize::MAX,
                cap: 1 << 24,
            })?;
        Ok((0..q).map(move |i| self.from_index(i)))
    }

    pub fn format_elem(&self, a: &FieldElem) -> String {
        if self.spec.k == 1 {
            a.0[0].to_string()
        } else {
            let parts: Vec<String> = a.0.iter().map(|c| c.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    /// Accepts `[c0,c1,...]` or a decimal integer (mapped into the prime subfield).
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let coeffs = body
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(1, 1, format!("bad field element '{s}'")))?;
            self.from_coeffs(&coeffs)
        } else {
            let v: u64 = s
                .parse()
                .map_err(|_| Error::parse(1, 1, format!("bad field element '{s}'")))?;
            Ok(self.from_u64(v))
        }
    }
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p);
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = prime::inv_mod(b[db], p).expect("nonzero divisor");
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        let shift = top - db;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bi, p), p);
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}
