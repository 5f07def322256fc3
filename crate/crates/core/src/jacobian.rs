//! Truncated Jacobian algebras.
//!
//! The complete path algebra is cut at path length `N`. The Jacobian ideal is
//! the span of all `u · ∂_α W · v`, computed as the closure of the cyclic
//! derivatives under left and right multiplication by arrows, and kept in
//! echelon form with columns ordered by path length. Pivots are then the
//! leading (lowest-degree) terms, so counting non-pivot paths per length
//! gives the graded dimensions of the associated graded quotient.
//!
//! A zero layer in degree `d` gives `m^d J = m^{d+1} J`, hence `m^d J = 0`
//! by Nakayama's lemma for the complete algebra: the algebra is
//! finite-dimensional with the sum of the lower layers as its dimension.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::Rational;
use crate::linalg::{axpy, SparseEchelon, SparseVec};
use crate::path::Word;
use crate::qp::QuiverWithPotential;

/// Largest number of paths enumerated before giving up.
pub const MAX_PATHS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobianError {
    #[error("truncation degree must be at least 2, got {0}")]
    BadTruncation(usize),
    #[error("path algebra up to length {truncation} has more than {limit} paths")]
    TooManyPaths { truncation: usize, limit: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

pub type JacobianResult<T> = Result<T, JacobianError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinDimStatus {
    FiniteDim(usize),
    UndeterminedAtTruncation(usize),
}

impl fmt::Display for FinDimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinDimStatus::FiniteDim(d) => write!(f, "FiniteDim({d})"),
            FinDimStatus::UndeterminedAtTruncation(n) => write!(f, "UndeterminedAtTruncation({n})"),
        }
    }
}

impl Serialize for FinDimStatus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FinDimCert {
    pub status: FinDimStatus,
    pub vanishing_degree: Option<usize>,
}

impl FinDimCert {
    pub fn is_finite(&self) -> bool {
        matches!(self.status, FinDimStatus::FiniteDim(_))
    }

    pub fn total_dim(&self) -> Option<usize> {
        match self.status {
            FinDimStatus::FiniteDim(d) => Some(d),
            FinDimStatus::UndeterminedAtTruncation(_) => None,
        }
    }
}

/// A path of the quiver; the empty word at `src` is the idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathInfo {
    pub src: usize,
    pub tgt: usize,
    pub word: Word,
}

/// Elements are sparse vectors over path indices; after [`TruncatedAlgebra::reduce`]
/// only basis paths occur.
pub type Element = SparseVec;

/// Path algebra modulo the Jacobian ideal and paths longer than `N`.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    qp: QuiverWithPotential,
    truncation: usize,
    paths: Vec<PathInfo>,
    index: HashMap<(usize, Word), usize>,
    ideal: SparseEchelon,
    graded_dims: Vec<usize>,
    basis: Vec<usize>,
    certificate: FinDimCert,
}

impl TruncatedAlgebra {
    /// Compute `J(Q, W)` modulo paths longer than `truncation`.
    pub fn new(qp: &QuiverWithPotential, truncation: usize) -> JacobianResult<Self> {
        if truncation < 2 {
            return Err(JacobianError::BadTruncation(truncation));
        }
        let q = qp.quiver();
        let mut paths: Vec<PathInfo> = (0..q.n()).map(|i| PathInfo { src: i, tgt: i, word: Vec::new() }).collect();
        let mut layer_start = 0;
        for _ in 0..truncation {
            let layer_end = paths.len();
            for p in layer_start..layer_end {
                for (x, a) in q.arrows().iter().enumerate() {
                    if a.src == paths[p].tgt {
                        let mut word = paths[p].word.clone();
                        word.push(x);
                        paths.push(PathInfo { src: paths[p].src, tgt: a.tgt, word });
                        if paths.len() > MAX_PATHS {
                            return Err(JacobianError::TooManyPaths { truncation, limit: MAX_PATHS });
                        }
                    }
                }
            }
            layer_start = layer_end;
        }
        let index: HashMap<(usize, Word), usize> =
            paths.iter().enumerate().map(|(x, p)| ((p.src, p.word.clone()), x)).collect();
        let mut alg = TruncatedAlgebra {
            qp: qp.clone(),
            truncation,
            paths,
            index,
            ideal: SparseEchelon::new(),
            graded_dims: Vec::new(),
            basis: Vec::new(),
            certificate: FinDimCert {
                status: FinDimStatus::UndeterminedAtTruncation(truncation),
                vanishing_degree: None,
            },
        };
        alg.close_ideal();
        alg.finish();
        Ok(alg)
    }

    fn close_ideal(&mut self) {
        let mut pending: Vec<SparseVec> = self.generators();
        while let Some(v) = pending.pop() {
            let Some(row) = self.ideal.insert(v) else { continue };
            let row = row.clone();
            for x in 0..self.qp.quiver().arrows().len() {
                let left = self.left_mul_arrow(x, &row);
                if !left.is_empty() {
                    pending.push(left);
                }
                let right = self.right_mul_arrow(&row, x);
                if !right.is_empty() {
                    pending.push(right);
                }
            }
        }
    }

    fn finish(&mut self) {
        let n = self.truncation;
        let mut dims = vec![0usize; n + 1];
        for (x, p) in self.paths.iter().enumerate() {
            if !self.ideal.is_pivot(x) {
                dims[p.word.len()] += 1;
                self.basis.push(x);
            }
        }
        // generators are exact through degree T - 1 for potential truncation T
        let exact_through = n.min(self.qp.truncation().saturating_sub(1));
        let vanishing = (0..n.min(exact_through + 1)).find(|&d| dims[d] == 0);
        self.certificate = match vanishing {
            Some(d) => {
                FinDimCert { status: FinDimStatus::FiniteDim(dims[..d].iter().sum()), vanishing_degree: Some(d) }
            }
            None => FinDimCert { status: FinDimStatus::UndeterminedAtTruncation(n), vanishing_degree: None },
        };
        self.graded_dims = dims;
    }

    /// The cyclic derivatives `∂_α W`, one per arrow, as vectors over paths.
    pub fn generators(&self) -> Vec<SparseVec> {
        (0..self.qp.quiver().arrows().len())
            .map(|a| {
                let d = self.qp.cyclic_derivative(a);
                let mut v = SparseVec::new();
                for (w, c) in d.terms() {
                    if let Some(&x) = self.index.get(&(d.src, w.clone())) {
                        v.insert(x, c.clone());
                    }
                }
                v
            })
            .collect()
    }

    fn left_mul_arrow(&self, a: usize, v: &SparseVec) -> SparseVec {
        let arrow = self.qp.quiver().arrow(a);
        let mut out = SparseVec::new();
        for (&x, c) in v {
            let p = &self.paths[x];
            if p.src != arrow.tgt || p.word.len() >= self.truncation {
                continue;
            }
            let mut word = Vec::with_capacity(p.word.len() + 1);
            word.push(a);
            word.extend_from_slice(&p.word);
            let y = self.index[&(arrow.src, word)];
            out.insert(y, c.clone());
        }
        out
    }

    fn right_mul_arrow(&self, v: &SparseVec, a: usize) -> SparseVec {
        let arrow = self.qp.quiver().arrow(a);
        let mut out = SparseVec::new();
        for (&x, c) in v {
            let p = &self.paths[x];
            if p.tgt != arrow.src || p.word.len() >= self.truncation {
                continue;
            }
            let mut word = p.word.clone();
            word.push(a);
            let y = self.index[&(p.src, word)];
            out.insert(y, c.clone());
        }
        out
    }

    pub fn qp(&self) -> &QuiverWithPotential {
        &self.qp
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn graded_dims(&self) -> &[usize] {
        &self.graded_dims
    }

    pub fn certificate(&self) -> FinDimCert {
        self.certificate
    }

    pub fn paths(&self) -> &[PathInfo] {
        &self.paths
    }

    pub fn path(&self, x: usize) -> &PathInfo {
        &self.paths[x]
    }

    /// Index of the path with the given source and word.
    pub fn path_index(&self, src: usize, word: &[usize]) -> Option<usize> {
        self.index.get(&(src, word.to_vec())).copied()
    }

    /// Indices of the basis paths (normal words).
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Number of relations in degree 1 (rank of the linear layer of the ideal).
    pub fn degree_one_relations(&self) -> usize {
        self.ideal.pivots().filter(|&x| self.paths[x].word.len() == 1).count()
    }

    /// Basis paths from `src` to `tgt`.
    pub fn basis_between(&self, src: usize, tgt: usize) -> Vec<usize> {
        self.basis.iter().copied().filter(|&x| self.paths[x].src == src && self.paths[x].tgt == tgt).collect()
    }

    /// Basis of `Hom(P_i, P_j) = e_j Λ e_i`: normal paths from `j` to `i`.
    pub fn hom_projectives(&self, i: usize, j: usize) -> JacobianResult<Vec<usize>> {
        let n = self.qp.quiver().n();
        for v in [i, j] {
            if v >= n {
                return Err(JacobianError::VertexOutOfRange(v));
            }
        }
        Ok(self.basis_between(j, i))
    }

    /// The element given by a single path (reduced to normal form).
    pub fn path_element(&self, src: usize, word: &[usize]) -> Option<Element> {
        let x = self.path_index(src, word)?;
        Some(self.reduce(SparseVec::from([(x, Rational::one())])))
    }

    pub fn idempotent(&self, i: usize) -> Element {
        SparseVec::from([(i, Rational::one())])
    }

    /// Normal form modulo the ideal.
    pub fn reduce(&self, v: SparseVec) -> Element {
        self.ideal.normal_form(v)
    }

    /// Is `v` zero in the algebra?
    pub fn is_zero(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Product `x · y` (x then y). Paths with mismatched endpoints multiply to
    /// zero; products longer than the truncation are dropped.
    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = SparseVec::new();
        for (&p, cp) in x {
            let pi = &self.paths[p];
            for (&r, cr) in y {
                let ri = &self.paths[r];
                if pi.tgt != ri.src || pi.word.len() + ri.word.len() > self.truncation {
                    continue;
                }
                let mut word = pi.word.clone();
                word.extend_from_slice(&ri.word);
                let z = self.index[&(pi.src, word)];
                axpy(&mut out, &(cp * cr), &SparseVec::from([(z, Rational::one())]));
            }
        }
        self.reduce(out)
    }

    /// Products of basis paths with matching endpoints, expanded in the basis.
    pub fn mult_table(&self) -> BTreeMap<(usize, usize), Element> {
        let mut table = BTreeMap::new();
        for &p in &self.basis {
            for &r in &self.basis {
                if self.paths[p].tgt != self.paths[r].src {
                    continue;
                }
                let prod = self.multiply(&self.unit_vec(p), &self.unit_vec(r));
                if !prod.is_empty() {
                    table.insert((p, r), prod);
                }
            }
        }
        table
    }

    fn unit_vec(&self, x: usize) -> SparseVec {
        SparseVec::from([(x, Rational::one())])
    }

    /// Render a path as arrow ids, `e<i>` (1-based) for idempotents.
    pub fn path_name(&self, x: usize) -> String {
        let p = &self.paths[x];
        if p.word.is_empty() {
            format!("e{}", p.src + 1)
        } else {
            self.qp.ids_of_word(&p.word).concat()
        }
    }

    /// Coefficient of `v` at path `x`.
    pub fn coefficient(v: &Element, x: usize) -> Rational {
        v.get(&x).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Shorthand for [`TruncatedAlgebra::new`].
pub fn truncated_quotient(qp: &QuiverWithPotential, truncation: usize) -> JacobianResult<TruncatedAlgebra> {
    TruncatedAlgebra::new(qp, truncation)
}
