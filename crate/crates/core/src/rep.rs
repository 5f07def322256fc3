//! Finite-dimensional representations of quivers with relations.
//!
//! A representation stores one `d_j x d_i` matrix per arrow `i -> j`, with
//! entries kept as rationals. Over a prime field the entries are canonical
//! residues in `0..p`, and all linear algebra runs in that field.

use num_traits::Zero;
use thiserror::Error;

use crate::field::{Field, FieldKind, PrimeField, Rational, RationalField};
use crate::linalg::{mat_mul, nullspace, rref, Matrix};
use crate::path::Word;
use crate::qp::QuiverWithPotential;
use crate::quiver::Quiver;

/// Run `$body` with `$f` bound to the concrete field of `$kind`.
macro_rules! with_field {
    ($kind:expr, $f:ident, $body:block) => {
        match $kind {
            FieldKind::Rationals => {
                let $f = &RationalField;
                $body
            }
            FieldKind::Prime(p) => {
                let $f = &PrimeField::new(p);
                $body
            }
        }
    };
}
pub(crate) use with_field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("expected {expected} dimensions, got {got}")]
    DimensionCount { expected: usize, got: usize },
    #[error("expected {expected} arrow matrices, got {got}")]
    ArrowCount { expected: usize, got: usize },
    #[error("matrix of arrow {arrow:?} should be {rows}x{cols}")]
    MatrixShape { arrow: String, rows: usize, cols: usize },
    #[error("entry {0} is not defined over the field")]
    NotInField(String),
    #[error("representations over different fields ({0} and {1})")]
    FieldMismatch(FieldKind, FieldKind),
    #[error("representations of different quivers")]
    QuiverMismatch,
    #[error("stability parameter has length {got}, expected {expected}")]
    ThetaLength { expected: usize, got: usize },
    #[error("total dimension {total} exceeds the enumeration cap {cap}")]
    CapExceeded { total: usize, cap: usize },
    #[error("submodule enumeration of non-thin modules needs a prime field")]
    NeedsPrimeField,
}

pub type RepResult<T> = Result<T, RepError>;

/// A representation of a quiver over `field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: FieldKind,
    dims: Vec<usize>,
    mats: Vec<Matrix<Rational>>,
}

impl Representation {
    /// Validate shapes against `q` and normalize entries into the field.
    pub fn new(q: &Quiver, field: FieldKind, dims: Vec<usize>, mats: Vec<Matrix<Rational>>) -> RepResult<Self> {
        if dims.len() != q.n() {
            return Err(RepError::DimensionCount { expected: q.n(), got: dims.len() });
        }
        if mats.len() != q.arrows().len() {
            return Err(RepError::ArrowCount { expected: q.arrows().len(), got: mats.len() });
        }
        let mut normalized = Vec::with_capacity(mats.len());
        for (a, m) in q.arrows().iter().zip(mats) {
            let (rows, cols) = (dims[a.tgt], dims[a.src]);
            if m.rows() != rows || m.cols() != cols {
                return Err(RepError::MatrixShape { arrow: a.id.clone(), rows, cols });
            }
            let mut bad = None;
            let m = m.map(|x| {
                field.normalize(x).unwrap_or_else(|| {
                    bad = Some(x.to_string());
                    Rational::zero()
                })
            });
            if let Some(x) = bad {
                return Err(RepError::NotInField(x));
            }
            normalized.push(m);
        }
        Ok(Representation { field, dims, mats: normalized })
    }

    pub fn zero(q: &Quiver, field: FieldKind) -> Self {
        let dims = vec![0; q.n()];
        let mats = q.arrows().iter().map(|_| Matrix::filled(0, 0, Rational::zero())).collect();
        Representation { field, dims, mats }
    }

    /// The simple module at vertex `i`.
    pub fn simple(q: &Quiver, field: FieldKind, i: usize) -> Self {
        let mut dims = vec![0; q.n()];
        dims[i] = 1;
        let mats = q.arrows().iter().map(|a| Matrix::filled(dims[a.tgt], dims[a.src], Rational::zero())).collect();
        Representation { field, dims, mats }
    }

    /// Thin representation (all `d_i <= 1` as given) from one scalar per arrow.
    /// Scalars on arrows touching a zero-dimensional vertex are ignored.
    pub fn thin(q: &Quiver, field: FieldKind, dims: Vec<usize>, scalars: &[Rational]) -> RepResult<Self> {
        let mats = q
            .arrows()
            .iter()
            .zip(scalars)
            .map(|(a, s)| {
                let (r, c) = (dims.get(a.tgt).copied().unwrap_or(0), dims.get(a.src).copied().unwrap_or(0));
                Matrix::filled(r, c, s.clone())
            })
            .collect();
        Self::new(q, field, dims, mats)
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn mats(&self) -> &[Matrix<Rational>] {
        &self.mats
    }

    pub fn mat(&self, arrow: usize) -> &Matrix<Rational> {
        &self.mats[arrow]
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn is_thin(&self) -> bool {
        self.dims.iter().all(|&d| d <= 1)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, q: &Quiver, other: &Self) -> RepResult<Self> {
        self.check_compatible(q, other)?;
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let mut m = Matrix::filled(dims[a.tgt], dims[a.src], Rational::zero());
                let (m1, m2) = (&self.mats[x], &other.mats[x]);
                for r in 0..m1.rows() {
                    for c in 0..m1.cols() {
                        m.set(r, c, m1.get(r, c).clone());
                    }
                }
                for r in 0..m2.rows() {
                    for c in 0..m2.cols() {
                        m.set(m1.rows() + r, m1.cols() + c, m2.get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        Ok(Representation { field: self.field, dims, mats })
    }

    /// Conjugate by invertible base changes `g_i` (one `d_i x d_i` matrix per
    /// vertex): `M_a -> g_j M_a g_i^{-1}`. Callers pass the inverses too.
    pub fn base_change(&self, q: &Quiver, g: &[Matrix<Rational>], g_inv: &[Matrix<Rational>]) -> RepResult<Self> {
        let mats = with_field!(self.field, f, {
            q.arrows()
                .iter()
                .enumerate()
                .map(|(x, a)| {
                    let m = mat_mul(f, &embed(f, &g[a.tgt]), &embed(f, &self.mats[x])).expect("shapes agree");
                    let m = mat_mul(f, &m, &embed(f, &g_inv[a.src])).expect("shapes agree");
                    lift(f, &m)
                })
                .collect::<Vec<_>>()
        });
        Representation::new(q, self.field, self.dims.clone(), mats)
    }

    /// Extend by zero along an inclusion of vertices: vertex `v` of `self`
    /// becomes `subset[v]` of `big`, arrows meeting the complement act by 0.
    pub fn extend_by_zero(&self, sub: &Quiver, big: &Quiver, subset: &[usize]) -> RepResult<Self> {
        let mut dims = vec![0; big.n()];
        for (v, &w) in subset.iter().enumerate() {
            dims[w] = self.dims[v];
        }
        let mats = big
            .arrows()
            .iter()
            .map(|a| match sub.arrow_index(&a.id) {
                Some(x) => self.mats[x].clone(),
                None => Matrix::filled(dims[a.tgt], dims[a.src], Rational::zero()),
            })
            .collect();
        Representation::new(big, self.field, dims, mats)
    }

    pub(crate) fn check_compatible(&self, q: &Quiver, other: &Self) -> RepResult<()> {
        if self.field != other.field {
            return Err(RepError::FieldMismatch(self.field, other.field));
        }
        if self.dims.len() != q.n()
            || other.dims.len() != q.n()
            || self.mats.len() != q.arrows().len()
            || other.mats.len() != q.arrows().len()
        {
            return Err(RepError::QuiverMismatch);
        }
        Ok(())
    }
}

pub(crate) fn embed<F: Field>(f: &F, m: &Matrix<Rational>) -> Matrix<F::Elem> {
    m.map(|x| f.embed(x).expect("entries are normalized into the field"))
}

pub(crate) fn lift<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<Rational> {
    m.map(|x| f.lift(x))
}

/// Matrix of the word `w` from `src`: `M_{w_k} ... M_{w_1}`.
fn eval_word<F: Field>(f: &F, mats: &[Matrix<F::Elem>], dims: &[usize], src: usize, w: &Word) -> Matrix<F::Elem> {
    let mut acc = Matrix::identity(f, dims[src]);
    for &a in w {
        acc = mat_mul(f, &mats[a], &acc).expect("composable word");
    }
    acc
}

/// Does `m` satisfy every cyclic-derivative relation of `qp`, with all paths
/// of length `qp.truncation()` acting as zero?
///
/// The second condition makes the truncation exact on `m`: dropped potential
/// terms only contribute relation terms of length at least the truncation.
pub fn check_module(qp: &QuiverWithPotential, m: &Representation) -> RepResult<bool> {
    let q = qp.quiver();
    if m.dims.len() != q.n() || m.mats.len() != q.arrows().len() {
        return Err(RepError::QuiverMismatch);
    }
    with_field!(m.field, f, {
        let mats: Vec<_> = m.mats.iter().map(|x| embed(f, x)).collect();
        for alpha in 0..q.arrows().len() {
            let d = qp.cyclic_derivative(alpha);
            let mut sum = Matrix::zeros(f, m.dims[d.tgt], m.dims[d.src]);
            for (w, c) in d.terms() {
                let c = f.embed(c).ok_or_else(|| RepError::NotInField(c.to_string()))?;
                let val = eval_word(f, &mats, &m.dims, d.src, w);
                for r in 0..sum.rows() {
                    for col in 0..sum.cols() {
                        let v = f.add(sum.get(r, col), &f.mul(&c, val.get(r, col)));
                        sum.set(r, col, v);
                    }
                }
            }
            if !crate::linalg::is_zero_matrix(f, &sum) {
                return Ok(false);
            }
        }
        Ok(nilpotent_within(f, q, &mats, &m.dims, qp.truncation()))
    })
}

/// Do all paths of length `len` act by zero? Tracks the spans `V^(l)` of the
/// images of length-`l` paths at every vertex.
fn nilpotent_within<F: Field>(f: &F, q: &Quiver, mats: &[Matrix<F::Elem>], dims: &[usize], len: usize) -> bool {
    // span vectors stored as columns
    let mut cur: Vec<Matrix<F::Elem>> = dims.iter().map(|&d| Matrix::identity(f, d)).collect();
    for _ in 0..len {
        let mut next_cols: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); q.n()];
        for (x, a) in q.arrows().iter().enumerate() {
            if cur[a.src].cols() == 0 || dims[a.tgt] == 0 {
                continue;
            }
            let img = mat_mul(f, &mats[x], &cur[a.src]).expect("shapes agree");
            for c in 0..img.cols() {
                next_cols[a.tgt].push((0..img.rows()).map(|r| img.get(r, c).clone()).collect());
            }
        }
        cur = next_cols.into_iter().zip(dims).map(|(cols, &d)| column_basis(f, cols, d)).collect();
        if cur.iter().all(|m| m.cols() == 0) {
            return true;
        }
    }
    false
}

/// Independent columns spanning the same space, as a `d x r` matrix.
fn column_basis<F: Field>(f: &F, cols: Vec<Vec<F::Elem>>, d: usize) -> Matrix<F::Elem> {
    if cols.is_empty() {
        return Matrix::zeros(f, d, 0);
    }
    let mut m = Matrix::from_rows(cols, d).expect("columns have length d");
    let r = rref(f, &mut m).len();
    let rows: Vec<Vec<F::Elem>> = (0..r).map(|i| m.row(i).to_vec()).collect();
    Matrix::from_rows(rows, d).expect("rows have length d").transpose()
}

/// Basis of a Hom space: one matrix `f_i: M_i -> N_i` (`dN_i x dM_i`) per vertex.
pub type Morphism = Vec<Matrix<Rational>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<Morphism>,
}

/// `Hom(m, n)`: solutions of `f_j M_a = N_a f_i` over all arrows `a: i -> j`.
pub fn hom_space(q: &Quiver, m: &Representation, n: &Representation) -> RepResult<HomSpace> {
    m.check_compatible(q, n)?;
    let mut offsets = Vec::with_capacity(q.n());
    let mut vars = 0;
    for i in 0..q.n() {
        offsets.push(vars);
        vars += n.dims[i] * m.dims[i];
    }
    let var = |i: usize, r: usize, c: usize| offsets[i] + r * m.dims[i] + c;
    with_field!(m.field, f, {
        let mut rows: Vec<Vec<_>> = Vec::new();
        for (x, a) in q.arrows().iter().enumerate() {
            let (i, j) = (a.src, a.tgt);
            let ma = embed(f, &m.mats[x]);
            let na = embed(f, &n.mats[x]);
            for r in 0..n.dims[j] {
                for c in 0..m.dims[i] {
                    let mut row = vec![f.zero(); vars];
                    for k in 0..m.dims[j] {
                        let v = f.add(&row[var(j, r, k)], ma.get(k, c));
                        row[var(j, r, k)] = v;
                    }
                    for k in 0..n.dims[i] {
                        let v = f.sub(&row[var(i, k, c)], na.get(r, k));
                        row[var(i, k, c)] = v;
                    }
                    rows.push(row);
                }
            }
        }
        let kernel = if rows.is_empty() {
            (0..vars)
                .map(|v| {
                    let mut e = vec![f.zero(); vars];
                    e[v] = f.one();
                    e
                })
                .collect()
        } else {
            nullspace(f, &Matrix::from_rows(rows, vars).expect("rows have equal length"))
        };
        let basis: Vec<Morphism> = kernel
            .iter()
            .map(|v| {
                (0..q.n())
                    .map(|i| {
                        let mut fi = Matrix::filled(n.dims[i], m.dims[i], Rational::zero());
                        for r in 0..n.dims[i] {
                            for c in 0..m.dims[i] {
                                fi.set(r, c, f.lift(&v[var(i, r, c)]));
                            }
                        }
                        fi
                    })
                    .collect()
            })
            .collect();
        Ok(HomSpace { dim: basis.len(), basis })
    })
}

/// `dim End(m) = 1`.
pub fn is_brick(q: &Quiver, m: &Representation) -> RepResult<bool> {
    Ok(hom_space(q, m, m)?.dim == 1)
}
