//! Dense univariate polynomials over a [`Field`], lowest coefficient first.
//! Just enough to split a polynomial into linear factors.

use super::field::{Field, FieldElem};

pub(crate) type UniPoly = Vec<FieldElem>;

pub(crate) fn trim(f: &Field, a: &mut UniPoly) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

fn degree(a: &UniPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn sub(f: &Field, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let zero = f.zero();
    let mut out: UniPoly = (0..a.len().max(b.len()))
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, &mut out);
    out
}

pub(crate) fn mul(f: &Field, a: &UniPoly, b: &UniPoly) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let prod = f.mul(x, y);
            f.add_assign(&mut out[i + j], &prod);
        }
    }
    trim(f, &mut out);
    out
}

pub(crate) fn divmod(f: &Field, a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    let mut r = a.clone();
    trim(f, &mut r);
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("trimmed leading coefficient is nonzero");
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(&r[top], &lead_inv);
        let shift = top - db;
        for (i, bi) in b.iter().enumerate() {
            let t = f.mul(&c, bi);
            r[shift + i] = f.sub(&r[shift + i], &t);
        }
        q[shift] = c;
        r.pop();
        trim(f, &mut r);
    }
    trim(f, &mut q);
    (q, r)
}

pub(crate) fn rem(f: &Field, a: &UniPoly, m: &UniPoly) -> UniPoly {
    divmod(f, a, m).1
}

pub(crate) fn monic(f: &Field, a: &UniPoly) -> UniPoly {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = f.inv(lead).expect("trimmed leading coefficient is nonzero");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub(crate) fn gcd(f: &Field, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub(crate) fn powmod(f: &Field, base: &UniPoly, mut e: u128, m: &UniPoly) -> UniPoly {
    let mut result = rem(f, &vec![f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    result
}

/// All roots of a squarefree polynomial that splits into distinct linear
/// factors over `f`, by equal-degree splitting with deterministic shifts.
pub(crate) fn split_roots(f: &Field, g: &UniPoly) -> Option<Vec<FieldElem>> {
    let g = monic(f, g);
    let mut pending = vec![g];
    let mut roots = Vec::new();
    let q = f.order()?;
    let p = f.characteristic();
    let mut shift: u128 = 0;
    while let Some(h) = pending.pop() {
        match degree(&h) {
            None | Some(0) => continue,
            Some(1) => {
                roots.push(f.neg(&h[0]));
                continue;
            }
            Some(_) => {}
        }
        let mut split = None;
        for _ in 0..q.min(4096) {
            shift = (shift + 1) % q;
            let delta = f.from_index(shift);
            let w = if p == 2 {
                // absolute trace of delta * X: sum of its 2^i powers over all i < degree
                let probe = vec![f.zero(), delta];
                let mut acc: UniPoly = Vec::new();
                let mut term = rem(f, &probe, &h);
                for _ in 0..f.degree() {
                    acc = add(f, &acc, &term);
                    term = rem(f, &mul(f, &term, &term), &h);
                }
                acc
            } else {
                let probe = vec![delta, f.one()];
                let mut w = powmod(f, &probe, (q - 1) / 2, &h);
                w = sub(f, &w, &vec![f.one()]);
                w
            };
            let d = gcd(f, &h, &w);
            let dd = degree(&d).unwrap_or(0);
            if dd > 0 && dd < degree(&h).unwrap_or(0) {
                split = Some(d);
                break;
            }
        }
        let d = split?;
        let (other, _) = divmod(f, &h, &d);
        pending.push(d);
        pending.push(monic(f, &other));
    }
    Some(roots)
}

fn add(f: &Field, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let zero = f.zero();
    let mut out: UniPoly = (0..a.len().max(b.len()))
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, &mut out);
    out
}

/// Evaluate at a point by Horner's rule.
pub(crate) fn eval(f: &Field, a: &UniPoly, x: &FieldElem) -> FieldElem {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}
