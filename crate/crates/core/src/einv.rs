//! Two-term complexes of projectives and E-invariants.
//!
//! A complex `P^{-1} -> P^0` is a block matrix whose entry in row `r`
//! (summand `P_y` of `P^0`) and column `c` (summand `P_x` of `P^{-1}`) is an
//! element of `Hom(P_x, P_y) = e_y Λ e_x`. Composition `Y ∘ X` is the matrix
//! product with entries multiplied as `Y[r][m] · X[m][c]`.
//!
//! `e(a1, a2)` is the dimension of `Hom(P^{-1}, Q^0)` modulo the homotopies
//! `f ∘ a1 + a2 ∘ g`, computed exactly over the rationals in the truncated
//! Jacobian algebra (which must carry a finite-dimension certificate).

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::rat;
use crate::jacobian::{Element, TruncatedAlgebra};
use crate::linalg::{axpy, SparseEchelon, SparseVec};

/// Coefficients of random presentations are drawn from `-R..=R`.
pub const SAMPLE_RANGE: i64 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EinvError {
    #[error("the truncated Jacobian algebra is not certified finite-dimensional")]
    NotFiniteDimensional,
    #[error("g has length {got}, expected {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("map has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("entry ({row}, {col}) does not lie in e_{tgt} Λ e_{src}")]
    Entry { row: usize, col: usize, tgt: usize, src: usize },
    #[error("complexes over different algebras")]
    AlgebraMismatch,
    #[error("need at least one sample")]
    NoSamples,
}

pub type EinvResult<T> = Result<T, EinvError>;

/// `P^{-1} -> P^0` with multiplicity vectors `p1`, `p0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    p1: Vec<usize>,
    p0: Vec<usize>,
    /// summand vertices of `P^{-1}` (columns) and `P^0` (rows), expanded
    src: Vec<usize>,
    tgt: Vec<usize>,
    map: Vec<Vec<Element>>,
}

fn expand(mult: &[usize]) -> Vec<usize> {
    mult.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect()
}

/// Split `g = [P^0] - [P^{-1}]` into `(p1, p0)` with disjoint supports.
pub fn presentation_space(g: &[i64]) -> (Vec<usize>, Vec<usize>) {
    let p1 = g.iter().map(|&x| if x < 0 { (-x) as usize } else { 0 }).collect();
    let p0 = g.iter().map(|&x| if x > 0 { x as usize } else { 0 }).collect();
    (p1, p0)
}

impl TwoTermComplex {
    /// Validate block shapes and that every entry lies in the right corner
    /// `e_y Λ e_x`; entries are reduced to normal form.
    pub fn new(alg: &TruncatedAlgebra, p1: Vec<usize>, p0: Vec<usize>, map: Vec<Vec<Element>>) -> EinvResult<Self> {
        let n = alg.qp().quiver().n();
        for v in [&p1, &p0] {
            if v.len() != n {
                return Err(EinvError::VectorLength { expected: n, got: v.len() });
            }
        }
        let (src, tgt) = (expand(&p1), expand(&p0));
        let got_cols = map.first().map_or(src.len(), Vec::len);
        if map.len() != tgt.len() || map.iter().any(|r| r.len() != src.len()) {
            return Err(EinvError::Shape { rows: tgt.len(), cols: src.len(), got_rows: map.len(), got_cols });
        }
        let mut reduced = Vec::with_capacity(map.len());
        for (r, row) in map.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (c, e) in row.into_iter().enumerate() {
                let e = alg.reduce(e);
                if e.keys().any(|&x| alg.path(x).src != tgt[r] || alg.path(x).tgt != src[c]) {
                    return Err(EinvError::Entry { row: r, col: c, tgt: tgt[r] + 1, src: src[c] + 1 });
                }
                out.push(e);
            }
            reduced.push(out);
        }
        Ok(TwoTermComplex { p1, p0, src, tgt, map: reduced })
    }

    /// The complex with zero map and the given terms.
    pub fn zero_map(alg: &TruncatedAlgebra, p1: Vec<usize>, p0: Vec<usize>) -> EinvResult<Self> {
        let (rows, cols) = (p0.iter().sum::<usize>(), p1.iter().sum::<usize>());
        Self::new(alg, p1, p0, vec![vec![Element::new(); cols]; rows])
    }

    /// A presentation with g-vector `g` and random coefficients on every
    /// basis path of every entry.
    pub fn random(alg: &TruncatedAlgebra, g: &[i64], rng: &mut impl Rng) -> EinvResult<Self> {
        let (p1, p0) = presentation_space(g);
        let (src, tgt) = (expand(&p1), expand(&p0));
        let map = tgt
            .iter()
            .map(|&y| {
                src.iter()
                    .map(|&x| {
                        alg.basis_between(y, x)
                            .into_iter()
                            .map(|p| (p, rat(rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE))))
                            .filter(|(_, c)| !c.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(alg, p1, p0, map)
    }

    pub fn p1(&self) -> &[usize] {
        &self.p1
    }

    pub fn p0(&self) -> &[usize] {
        &self.p0
    }

    pub fn map(&self) -> &[Vec<Element>] {
        &self.map
    }

    /// `[P^0] - [P^{-1}]`.
    pub fn g_vector(&self) -> Vec<i64> {
        self.p0.iter().zip(&self.p1).map(|(&a, &b)| a as i64 - b as i64).collect()
    }

    /// `U ∘ a ∘ V` for block matrices `U` on `P^0` and `V` on `P^{-1}`;
    /// an isomorphic complex when both are invertible.
    pub fn conjugate(&self, alg: &TruncatedAlgebra, u: &[Vec<Element>], v: &[Vec<Element>]) -> EinvResult<Self> {
        let map = compose(alg, u, &compose(alg, &self.map, v));
        Self::new(alg, self.p1.clone(), self.p0.clone(), map)
    }
}

/// Block product `Y ∘ X`.
pub fn compose(alg: &TruncatedAlgebra, y: &[Vec<Element>], x: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let cols = x.first().map_or(0, Vec::len);
    y.iter()
        .map(|yrow| {
            (0..cols)
                .map(|c| {
                    let mut acc = SparseVec::new();
                    for (m, ym) in yrow.iter().enumerate() {
                        axpy(&mut acc, &rat(1), &alg.multiply(ym, &x[m][c]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn require_finite(alg: &TruncatedAlgebra) -> EinvResult<()> {
    if alg.certificate().is_finite() {
        Ok(())
    } else {
        Err(EinvError::NotFiniteDimensional)
    }
}

/// `e(a1, a2) = dim Hom_{K^b(proj)}(a1, a2[1])`.
pub fn e_pair(alg: &TruncatedAlgebra, a1: &TwoTermComplex, a2: &TwoTermComplex) -> EinvResult<usize> {
    require_finite(alg)?;
    let n = alg.qp().quiver().n();
    if a1.p1.len() != n || a2.p1.len() != n {
        return Err(EinvError::AlgebraMismatch);
    }
    // coordinates of Hom(P1^{-1}, Q^0): (row of Q^0, column of P1^{-1}, basis path)
    let mut coord = std::collections::HashMap::new();
    for (r, &y) in a2.tgt.iter().enumerate() {
        for (c, &x) in a1.src.iter().enumerate() {
            for p in alg.basis_between(y, x) {
                let next = coord.len();
                coord.insert((r, c, p), next);
            }
        }
    }
    let target_dim = coord.len();
    let flatten = |blocks: &[Vec<Element>]| {
        let mut v = SparseVec::new();
        for (r, row) in blocks.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                for (&p, coef) in e {
                    v.insert(coord[&(r, c, p)], coef.clone());
                }
            }
        }
        v
    };
    let mut image = SparseEchelon::new();
    // f: P1^0 -> Q^0, unit at (r, m) carrying a basis path
    for (r, &y) in a2.tgt.iter().enumerate() {
        for (m, &x) in a1.tgt.iter().enumerate() {
            for p in alg.basis_between(y, x) {
                let path = Element::from([(p, rat(1))]);
                let prod: Vec<Vec<Element>> = (0..a2.tgt.len())
                    .map(|rr| {
                        (0..a1.src.len())
                            .map(|c| if rr == r { alg.multiply(&path, &a1.map[m][c]) } else { Element::new() })
                            .collect()
                    })
                    .collect();
                image.insert(flatten(&prod));
            }
        }
    }
    // g: P1^{-1} -> Q^{-1}, unit at (s, c) carrying a basis path
    for (s, &y) in a2.src.iter().enumerate() {
        for (c, &x) in a1.src.iter().enumerate() {
            for p in alg.basis_between(y, x) {
                let path = Element::from([(p, rat(1))]);
                let prod: Vec<Vec<Element>> = (0..a2.tgt.len())
                    .map(|r| {
                        (0..a1.src.len())
                            .map(|cc| if cc == c { alg.multiply(&a2.map[r][s], &path) } else { Element::new() })
                            .collect()
                    })
                    .collect();
                image.insert(flatten(&prod));
            }
        }
    }
    Ok(target_dim - image.len())
}

/// Minimum of `e(a1, a2)` over random presentations of `g1` and `g2`, with
/// the pair attaining it. An attained upper bound for the generic value.
pub fn e_generic(
    alg: &TruncatedAlgebra,
    g1: &[i64],
    g2: &[i64],
    samples: usize,
    seed: u64,
) -> EinvResult<(usize, (TwoTermComplex, TwoTermComplex))> {
    require_finite(alg)?;
    if samples == 0 {
        return Err(EinvError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, (TwoTermComplex, TwoTermComplex))> = None;
    for _ in 0..samples {
        let a1 = TwoTermComplex::random(alg, g1, &mut rng)?;
        let a2 = TwoTermComplex::random(alg, g2, &mut rng)?;
        let e = e_pair(alg, &a1, &a2)?;
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, (a1, a2)));
        }
    }
    Ok(best.expect("at least one sample"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RigidTameReport {
    pub g: Vec<i64>,
    pub samples: usize,
    pub seed: u64,
    /// min of `e(a, a)`: zero is evidence of rigidity
    pub diagonal_min: usize,
    /// min of `e(a, b)` for independent `a`, `b`: zero is evidence of tameness
    pub off_diagonal_min: usize,
    pub label: &'static str,
}

pub fn rigid_tame_probe(alg: &TruncatedAlgebra, g: &[i64], samples: usize, seed: u64) -> EinvResult<RigidTameReport> {
    require_finite(alg)?;
    if samples == 0 {
        return Err(EinvError::NoSamples);
    }
    let n = alg.qp().quiver().n();
    if g.len() != n {
        return Err(EinvError::VectorLength { expected: n, got: g.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut diag, mut off) = (usize::MAX, usize::MAX);
    for _ in 0..samples {
        let a = TwoTermComplex::random(alg, g, &mut rng)?;
        let b = TwoTermComplex::random(alg, g, &mut rng)?;
        diag = diag.min(e_pair(alg, &a, &a)?);
        off = off.min(e_pair(alg, &a, &b)?);
    }
    Ok(RigidTameReport {
        g: g.to_vec(),
        samples,
        seed,
        diagonal_min: diag,
        off_diagonal_min: off,
        label: "attained upper bound",
    })
}
