//! Dense exact linear algebra over a [`Field`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::gf::{Field, FieldElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: &Arc<Field>, rows: Vec<Vec<FieldElem>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place. Pivots are taken column by column,
    /// choosing the first row with a nonzero entry, so the result is
    /// deterministic. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(r) = (prow..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(prow, r);
            let inv = f.inv(self.get(prow, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(prow, c), &inv);
                self.set(prow, c, v);
            }
            let pivot_row: Vec<FieldElem> = self.row(prow)[col..].to_vec();
            for r2 in 0..self.rows {
                if r2 == prow {
                    continue;
                }
                let factor = self.get(r2, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (offset, pv) in pivot_row.iter().enumerate() {
                    if pv.is_zero() {
                        continue;
                    }
                    let c = col + offset;
                    let v = f.sub(self.get(r2, c), &f.mul(&factor, pv));
                    self.set(r2, c, v);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

/// Solves A x = b, setting free variables to zero. `None` when inconsistent.
pub fn solve(a: &Matrix, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let f = a.field().clone();
    let mut aug = Matrix::zeros(&f, a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.cols(), b[r].clone());
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols()];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, a.cols()).clone();
    }
    Some(x)
}

/// One sparse linear equation: column -> coefficient, and the right-hand side.
pub type SparseRow = (BTreeMap<usize, FieldElem>, FieldElem);

/// Solves a sparse system row by row. Each new row is reduced against the
/// stored pivot rows (keyed by their smallest column) and kept as a pivot if
/// anything survives. Free variables are set to zero. `None` when inconsistent.
pub fn solve_sparse(field: &Field, ncols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Option<Vec<FieldElem>> {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (mut row, mut rhs) in rows {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                if !rhs.is_zero() {
                    return None;
                }
                break;
            };
            match pivots.get(&lead) {
                Some((prow, prhs)) => {
                    let factor = lead_val.clone();
                    for (c, v) in prow {
                        let cur = row.get(c).cloned().unwrap_or_else(|| field.zero());
                        let next = field.sub(&cur, &field.mul(&factor, v));
                        if next.is_zero() {
                            row.remove(c);
                        } else {
                            row.insert(*c, next);
                        }
                    }
                    rhs = field.sub(&rhs, &field.mul(&factor, prhs));
                }
                None => {
                    let inv = field.inv(lead_val).expect("entries are nonzero");
                    for v in row.values_mut() {
                        *v = field.mul(v, &inv);
                    }
                    rhs = field.mul(&rhs, &inv);
                    pivots.insert(lead, (row, rhs));
                    break;
                }
            }
        }
    }
    let mut x = vec![field.zero(); ncols];
    for (&lead, (row, rhs)) in pivots.iter().rev() {
        let mut v = rhs.clone();
        for (c, a) in row.range(lead + 1..) {
            if !x[*c].is_zero() {
                v = field.sub(&v, &field.mul(a, &x[*c]));
            }
        }
        x[lead] = v;
    }
    Some(x)
}
