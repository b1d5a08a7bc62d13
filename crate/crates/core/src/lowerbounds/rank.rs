use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::linalg::Matrix;
use crate::poly::{Monomial, Poly, VarLayout};

/// Coefficients of f arranged with rows indexed by monomials in the `left`
/// variables and columns by monomials in the `right` variables. Only
/// monomials that occur in f index rows and columns.
#[derive(Debug, Clone)]
pub struct CoefficientMatrix {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub matrix: Matrix,
}

fn project(m: &Monomial, vars: &[usize]) -> Monomial {
    let mut out = Monomial::one(m.nvars());
    for &v in vars {
        out.set_exp(v, m.exp(v));
    }
    out
}

fn monomial_name(m: &Monomial, layout: &VarLayout) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            if e == 1 {
                layout.name(v)
            } else {
                format!("{}^{e}", layout.name(v))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl CoefficientMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// CSV with a header row of column monomials and one row per left monomial.
    pub fn to_csv(&self, layout: &VarLayout) -> String {
        let field = self.matrix.field();
        let mut out = String::from("monomial");
        for c in &self.cols {
            let _ = write!(out, ",{}", monomial_name(c, layout));
        }
        out.push('\n');
        for (r, m) in self.rows.iter().enumerate() {
            out.push_str(&monomial_name(m, layout));
            for c in 0..self.cols.len() {
                let _ = write!(out, ",\"{}\"", field.format_elem(self.matrix.get(r, c)));
            }
            out.push('\n');
        }
        out
    }
}

/// Entry (m, m') is the coefficient of m*m' in f.
pub fn coefficient_matrix(f: &Poly, left: &[usize], right: &[usize]) -> CoefficientMatrix {
    let mut entries: BTreeMap<(Monomial, Monomial), _> = BTreeMap::new();
    let mut rows = std::collections::BTreeSet::new();
    let mut cols = std::collections::BTreeSet::new();
    for (m, c) in f.terms() {
        let l = project(m, left);
        let r = project(m, right);
        rows.insert(l.clone());
        cols.insert(r.clone());
        entries.insert((l, r), c.clone());
    }
    let rows: Vec<Monomial> = rows.into_iter().collect();
    let cols: Vec<Monomial> = cols.into_iter().collect();
    let mut matrix = Matrix::zeros(f.field(), rows.len(), cols.len());
    for (ri, rm) in rows.iter().enumerate() {
        for (ci, cm) in cols.iter().enumerate() {
            if let Some(c) = entries.get(&(rm.clone(), cm.clone())) {
                matrix.set(ri, ci, c.clone());
            }
        }
    }
    CoefficientMatrix {
        left: left.to_vec(),
        right: right.to_vec(),
        rows,
        cols,
        matrix,
    }
}

/// Dimension of the span of f(x, b) over b in {0,1}^right, as polynomials in
/// the left variables.
pub fn eval_dimension(f: &Poly, left: &[usize], right: &[usize]) -> usize {
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        let l = project(m, left);
        let next = row_index.len();
        let idx = *row_index.entry(l).or_insert(next);
        let mask = right
            .iter()
            .enumerate()
            .filter(|(_, &v)| m.exp(v) > 0)
            .fold(0u64, |acc, (bit, _)| acc | (1 << bit));
        terms.push((idx, mask, c));
    }
    let field = f.field();
    let points = 1usize << right.len();
    let mut matrix = Matrix::zeros(field, points, row_index.len().max(1));
    for b in 0..points as u64 {
        for (idx, mask, c) in &terms {
            if mask & !b == 0 {
                let cur = matrix.get(b as usize, *idx).clone();
                matrix.set(b as usize, *idx, field.add(&cur, c));
            }
        }
    }
    matrix.rank()
}

/// Largest coefficient-matrix rank over the prefix cuts of `order`, which is
/// the smallest width of a read-once oblivious ABP for f in that order.
pub fn roabp_width(f: &Poly, order: &[usize]) -> usize {
    (1..order.len())
        .map(|i| coefficient_matrix(f, &order[..i], &order[i..]).rank())
        .max()
        .unwrap_or(1)
        .max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::poly::parse_poly;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn xy(n: usize) -> VarLayout {
        VarLayout::pair(n, 'y', n)
    }

    #[test]
    fn diagonal_rank() {
        let f = Arc::new(Field::prime(5).unwrap());
        let p = parse_poly(&f, &xy(2), "x1*y1 + x2*y2").unwrap();
        let m = coefficient_matrix(&p, &[0, 1], &[2, 3]);
        assert_eq!(m.rank(), 2);
        assert_eq!(coefficient_matrix(&p, &[2, 3], &[0, 1]).rank(), 2);
        let csv = m.to_csv(&xy(2));
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("monomial,y2,y1\n"));
    }

    #[test]
    fn product_has_rank_one() {
        let f = Arc::new(Field::prime(7).unwrap());
        let p = parse_poly(&f, &xy(2), "x1*y1 + 2*x1*y2 + 3*x2*y1 + 6*x2*y2").unwrap();
        assert_eq!(coefficient_matrix(&p, &[0, 1], &[2, 3]).rank(), 1);
        assert_eq!(eval_dimension(&p, &[0, 1], &[2, 3]), 1);
    }

    #[test]
    fn independent_of_right_side() {
        let f = Arc::new(Field::prime(3).unwrap());
        let p = parse_poly(&f, &xy(2), "x1*x2 + x1 + 2").unwrap();
        assert_eq!(eval_dimension(&p, &[0, 1], &[2, 3]), 1);
    }

    #[test]
    fn widths_depend_on_order() {
        let f = Arc::new(Field::prime(3).unwrap());
        let p = parse_poly(&f, &xy(2), "x1*y1*x2*y2 + x1*y1 + x2*y2 + 1").unwrap();
        assert_eq!(roabp_width(&p, &[0, 2, 1, 3]), 2);
        assert_eq!(roabp_width(&p, &[0, 1, 2, 3]), 4);
        let mono = parse_poly(&f, &xy(2), "x1*x2*y1*y2").unwrap();
        assert_eq!(roabp_width(&mono, &[3, 1, 0, 2]), 1);
    }

    proptest! {
        #[test]
        fn eval_dimension_is_at_most_rank(coeffs in proptest::collection::vec(0u64..3, 16)) {
            let f = Arc::new(Field::prime(3).unwrap());
            let terms = coeffs.iter().enumerate().map(|(mask, &c)| {
                (Monomial::from_mask(4, mask as u64), f.from_u64(c))
            });
            let p = Poly::from_terms(&f, 4, terms).unwrap();
            let m = coefficient_matrix(&p, &[0, 1], &[2, 3]);
            prop_assert!(eval_dimension(&p, &[0, 1], &[2, 3]) <= m.rank());
            prop_assert_eq!(m.rank(), coefficient_matrix(&p, &[2, 3], &[0, 1]).rank());
            prop_assert_eq!(eval_dimension(&p, &[0, 1], &[2, 3]), m.rank());
            prop_assert!(roabp_width(&p, &[0, 1, 2, 3]) >= m.rank());
        }
    }
}
