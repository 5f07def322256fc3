//! Dense exact linear algebra over any [`Field`], plus an incremental sparse
//! echelon basis used for ideal computations in path algebras.

use std::collections::BTreeMap;

use crate::field::{Field, Rational};
use num_traits::Zero;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    /// Build from row vectors; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn zeros<F: Field<Elem = T>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = T>>(f: &F, n: usize) -> Self {
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }
}

/// Matrix product `a * b`; `None` on a shape mismatch.
pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if a.cols != b.rows {
        return None;
    }
    let mut out = Matrix::zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let prod = f.mul(aik, b.get(k, j));
                let cur = f.add(out.get(i, j), &prod);
                out.set(i, j, cur);
            }
        }
    }
    Some(out)
}

pub fn is_zero_matrix<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.data.iter().all(|x| f.is_zero(x))
}

/// In-place reduced row echelon form. Returns the pivot columns in order.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(src) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
            continue;
        };
        m.swap_rows(src, row);
        let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
        for c in col..m.cols {
            let v = f.mul(m.get(row, c), &inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row || f.is_zero(m.get(r, col)) {
                continue;
            }
            let factor = m.get(r, col).clone();
            for c in col..m.cols {
                let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(work.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::zeros(f, n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, n + r, f.one());
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(f, n, n);
    for r in 0..n {
        for c in 0..n {
            inv.set(r, c, aug.get(r, n + c).clone());
        }
    }
    Some(inv)
}

/// A sparse vector over the rationals, keyed by column.
pub type SparseVec = BTreeMap<usize, Rational>;

/// Incrementally built echelon basis of a subspace of a space with ordered
/// coordinates. Each stored row has a distinct *leading* (smallest) column.
///
/// Only leading terms are reduced on insertion; [`SparseEchelon::normal_form`]
/// performs full reduction when needed.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduce `v` against the basis and store it if independent. Returns the
    /// stored row (normalized to leading coefficient 1) when it was new.
    pub fn insert(&mut self, mut v: SparseVec) -> Option<&SparseVec> {
        v.retain(|_, c| !c.is_zero());
        loop {
            let (&lead, lead_coef) = v.iter().next()?;
            match self.rows.get(&lead) {
                Some(row) => {
                    let factor = lead_coef.clone();
                    axpy(&mut v, &-factor, row);
                }
                None => {
                    let inv = lead_coef.recip();
                    for c in v.values_mut() {
                        *c *= &inv;
                    }
                    self.rows.insert(lead, v);
                    return self.rows.get(&lead);
                }
            }
        }
    }

    /// Fully reduce `v`: the result has no pivot columns in its support.
    pub fn normal_form(&self, mut v: SparseVec) -> SparseVec {
        v.retain(|_, c| !c.is_zero());
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(col, _)| self.rows.contains_key(col)).map(|(col, c)| (*col, c.clone()));
            let Some((col, coef)) = next else {
                return v;
            };
            axpy(&mut v, &-coef, &self.rows[&col]);
            cursor = col + 1;
        }
    }
}

/// `v += a * w`, dropping zeros.
pub fn axpy(v: &mut SparseVec, a: &Rational, w: &SparseVec) {
    for (col, c) in w {
        let entry = v.entry(*col).or_insert_with(Rational::zero);
        *entry += a * c;
        if entry.is_zero() {
            v.remove(col);
        }
    }
}
