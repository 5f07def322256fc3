//! Quivers with potentials: potentials in rotation-normal form, cyclic
//! derivatives, restriction, direct sums, right equivalences and
//! premutation.
//!
//! Potentials live in the complete path algebra truncated at a degree `N`:
//! cycles longer than `N` are dropped (and counted), which keeps every series
//! computation finite and exact below `N`.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::Rational;
use crate::linalg::{inverse, Matrix};
use crate::path::{expand_word, format_sum, path_endpoints, PathCombination, Word};
use crate::quiver::{Arrow, Quiver, QuiverError};

pub const DEFAULT_TRUNCATION: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("word is not a closed path: {0:?}")]
    NotClosed(Vec<String>),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("image of arrow {0:?} does not have the arrow's endpoints")]
    EndpointMismatch(String),
    #[error("linear part of the substitution is not invertible between vertices {0} and {1}")]
    SingularLinearPart(usize, usize),
    #[error("vertex {0} lies on a 2-cycle")]
    TwoCycleAtVertex(usize),
    #[error("direct sum needs equal vertex counts, got {0} and {1}")]
    VertexCountMismatch(usize, usize),
    #[error("arrow id {0:?} occurs in both summands")]
    SharedArrow(String),
    #[error("truncation degree must be at least 2, got {0}")]
    BadTruncation(usize),
    #[error("reduction did not converge within {0} rounds")]
    NonConvergence(usize),
}

pub type QpResult<T> = Result<T, QpError>;

/// A potential: cycles in rotation-normal form with nonzero rational
/// coefficients. Words index into the arrow list of the owning quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    terms: BTreeMap<Word, Rational>,
    truncation: usize,
    dropped: usize,
}

impl Potential {
    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Number of cycles discarded for exceeding the truncation degree.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).min()
    }
}

/// A quiver (arrow list may contain 2-cycles, never loops) with a potential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    quiver: Quiver,
    potential: Potential,
    ranks: Vec<usize>,
}

impl QuiverWithPotential {
    /// The quiver with zero potential.
    pub fn new(quiver: Quiver, truncation: usize) -> QpResult<Self> {
        if truncation < 2 {
            return Err(QpError::BadTruncation(truncation));
        }
        let ranks = quiver.arrow_id_ranks();
        Ok(QuiverWithPotential {
            quiver,
            potential: Potential { terms: BTreeMap::new(), truncation, dropped: 0 },
            ranks,
        })
    }

    /// Build from terms given as arrow-id words.
    pub fn from_id_terms<S: AsRef<str>>(
        quiver: Quiver,
        terms: &[(Vec<S>, Rational)],
        truncation: usize,
    ) -> QpResult<Self> {
        let mut qp = Self::new(quiver, truncation)?;
        for (ids, c) in terms {
            let word = qp.word_of_ids(ids)?;
            qp.add_term(&word, c.clone())?;
        }
        Ok(qp)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn truncation(&self) -> usize {
        self.potential.truncation
    }

    pub fn with_truncation(&self, truncation: usize) -> QpResult<Self> {
        let mut out = Self::new(self.quiver.clone(), truncation)?;
        out.potential.dropped = self.potential.dropped;
        for (w, c) in &self.potential.terms {
            out.add_term(w, c.clone())?;
        }
        Ok(out)
    }

    /// No potential terms of length at most 2.
    pub fn is_reduced(&self) -> bool {
        self.potential.terms.keys().all(|w| w.len() > 2)
    }

    pub fn word_of_ids<S: AsRef<str>>(&self, ids: &[S]) -> QpResult<Word> {
        ids.iter()
            .map(|id| {
                let id = id.as_ref();
                self.quiver.arrow_index(id).ok_or_else(|| QpError::UnknownArrow(id.to_string()))
            })
            .collect()
    }

    pub fn ids_of_word(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&a| self.quiver.arrow(a).id.clone()).collect()
    }

    /// Minimal rotation of a closed path, comparing arrow ids
    /// lexicographically.
    pub fn normalize_cycle(&self, word: &[usize]) -> QpResult<Word> {
        match path_endpoints(&self.quiver, word) {
            Some((s, t)) if s == t => {}
            _ => return Err(QpError::NotClosed(self.ids_of_word_lossy(word))),
        }
        Ok(min_rotation(word, &self.ranks))
    }

    fn ids_of_word_lossy(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&a| self.quiver.arrows().get(a).map_or_else(|| format!("#{a}"), |x| x.id.clone())).collect()
    }

    /// Add `coef * word` to the potential. Cycles longer than the truncation
    /// degree are counted and discarded.
    pub fn add_term(&mut self, word: &[usize], coef: Rational) -> QpResult<()> {
        let key = self.normalize_cycle(word)?;
        if coef.is_zero() {
            return Ok(());
        }
        if key.len() > self.potential.truncation {
            self.potential.dropped += 1;
            return Ok(());
        }
        let entry = self.potential.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.potential.terms.remove(&key);
        }
        Ok(())
    }

    /// `∂_α W`: each occurrence `c = u α v` contributes `v u`, a path from
    /// `tgt(α)` to `src(α)`.
    pub fn cyclic_derivative(&self, alpha: usize) -> PathCombination {
        let arr = self.quiver.arrow(alpha);
        let mut out = PathCombination::zero(arr.tgt, arr.src);
        for (w, c) in &self.potential.terms {
            for p in (0..w.len()).filter(|&p| w[p] == alpha) {
                let mut vu: Word = w[p + 1..].to_vec();
                vu.extend_from_slice(&w[..p]);
                out.add_term(vu, c.clone());
            }
        }
        out.truncated(self.truncation() - 1)
    }

    pub fn cyclic_derivative_by_id(&self, id: &str) -> QpResult<PathCombination> {
        let a = self.quiver.arrow_index(id).ok_or_else(|| QpError::UnknownArrow(id.to_string()))?;
        Ok(self.cyclic_derivative(a))
    }

    /// Restriction to the full subquiver on `subset`: terms leaving the
    /// subset are deleted.
    pub fn restrict(&self, subset: &[usize]) -> QpResult<Self> {
        let (_, pos) = self.quiver.subset_positions(subset)?;
        let sub = self.quiver.full_subquiver(subset)?;
        let mut new_index = vec![None; self.quiver.arrows().len()];
        let mut next = 0;
        for (x, a) in self.quiver.arrows().iter().enumerate() {
            if pos[a.src].is_some() && pos[a.tgt].is_some() {
                new_index[x] = Some(next);
                next += 1;
            }
        }
        let mut out = Self::new(sub, self.truncation())?;
        for (w, c) in &self.potential.terms {
            let mapped: Option<Word> = w.iter().map(|&a| new_index[a]).collect();
            if let Some(m) = mapped {
                out.add_term(&m, c.clone())?;
            }
        }
        Ok(out)
    }

    /// Arrow-disjoint union on a common vertex set, potentials added. The
    /// result is truncated at the smaller of the two degrees.
    pub fn direct_sum(&self, other: &Self) -> QpResult<Self> {
        let (n, m) = (self.quiver.n(), other.quiver.n());
        if n != m {
            return Err(QpError::VertexCountMismatch(n, m));
        }
        let ids: HashSet<&str> = self.quiver.arrows().iter().map(|a| a.id.as_str()).collect();
        if let Some(a) = other.quiver.arrows().iter().find(|a| ids.contains(a.id.as_str())) {
            return Err(QpError::SharedArrow(a.id.clone()));
        }
        let offset = self.quiver.arrows().len();
        let mut arrows = self.quiver.arrows().to_vec();
        arrows.extend(other.quiver.arrows().iter().cloned());
        let q = Quiver::from_arrows(n, arrows, Some(self.quiver.labels().to_vec()), false)?;
        let mut out = Self::new(q, self.truncation().min(other.truncation()))?;
        out.potential.dropped = self.potential.dropped + other.potential.dropped;
        for (w, c) in &self.potential.terms {
            out.add_term(w, c.clone())?;
        }
        for (w, c) in &other.potential.terms {
            let shifted: Word = w.iter().map(|&a| a + offset).collect();
            out.add_term(&shifted, c.clone())?;
        }
        Ok(out)
    }

    /// Images for every arrow: entries of `phi` override the identity.
    pub fn substitution_images(&self, phi: &BTreeMap<usize, PathCombination>) -> QpResult<Vec<PathCombination>> {
        let q = &self.quiver;
        let mut images: Vec<PathCombination> = (0..q.arrows().len()).map(|a| PathCombination::arrow(q, a)).collect();
        for (&a, img) in phi {
            let arr = q.arrows().get(a).ok_or_else(|| QpError::UnknownArrow(format!("#{a}")))?;
            let consistent = img.src == arr.src
                && img.tgt == arr.tgt
                && img.terms().keys().all(|w| {
                    if w.is_empty() {
                        arr.src == arr.tgt
                    } else {
                        path_endpoints(q, w) == Some((arr.src, arr.tgt))
                    }
                });
            if !consistent {
                return Err(QpError::EndpointMismatch(arr.id.clone()));
            }
            images[a] = img.clone();
        }
        self.check_linear_part(&images)?;
        Ok(images)
    }

    /// The degree-1 part of a substitution must be invertible on each bundle
    /// of parallel arrows.
    fn check_linear_part(&self, images: &[PathCombination]) -> QpResult<()> {
        let q = &self.quiver;
        let mut bundles: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (x, a) in q.arrows().iter().enumerate() {
            bundles.entry((a.src, a.tgt)).or_default().push(x);
        }
        for ((s, t), arrows) in bundles {
            let rows: Vec<Vec<Rational>> =
                arrows.iter().map(|&x| arrows.iter().map(|&y| images[x].linear_coefficient(y)).collect()).collect();
            let m = Matrix::from_rows(rows, arrows.len()).expect("square");
            if inverse(&crate::field::RationalField, &m).is_none() {
                return Err(QpError::SingularLinearPart(s, t));
            }
        }
        Ok(())
    }

    /// Rewrite the potential through the substitution `phi` (arrows not in
    /// the map are fixed), truncating at the potential's degree.
    pub fn apply_right_equivalence(&self, phi: &BTreeMap<usize, PathCombination>) -> QpResult<Self> {
        let images = self.substitution_images(phi)?;
        Ok(self.substitute_unchecked(&images))
    }

    pub(crate) fn substitute_unchecked(&self, images: &[PathCombination]) -> Self {
        let n = self.truncation();
        let mut out = Self::new(self.quiver.clone(), n).expect("truncation already validated");
        out.potential.dropped = self.potential.dropped;
        for (w, c) in &self.potential.terms {
            for (v, cv) in expand_word(w, images, n) {
                out.add_term(&v, cv * c).expect("substitution preserves cycles");
            }
        }
        out
    }

    /// Premutation at `k`: composite arrows `[ab]` for each path `a b`
    /// through `k`, reversed arrows `a*` for the arrows at `k`, and the
    /// potential `[W] + Σ [ab] b* a*`.
    pub fn premutate(&self, k: usize) -> QpResult<Self> {
        let q = &self.quiver;
        if k >= q.n() {
            return Err(QuiverError::VertexOutOfRange(k, q.n()).into());
        }
        if q.on_two_cycle(k) {
            return Err(QpError::TwoCycleAtVertex(k));
        }
        let arrows = q.arrows();
        let incoming: Vec<usize> = (0..arrows.len()).filter(|&x| arrows[x].tgt == k).collect();
        let outgoing: Vec<usize> = (0..arrows.len()).filter(|&x| arrows[x].src == k).collect();
        let mut used: HashSet<String> = HashSet::new();
        let mut new_arrows = Vec::new();
        let mut new_index = vec![usize::MAX; arrows.len()];
        for (x, a) in arrows.iter().enumerate() {
            if a.src != k && a.tgt != k {
                new_index[x] = new_arrows.len();
                let id = fresh(a.id.clone(), &mut used);
                new_arrows.push(Arrow::new(id, a.src, a.tgt));
            }
        }
        let mut composite = BTreeMap::new();
        for &a in &incoming {
            for &b in &outgoing {
                composite.insert((a, b), new_arrows.len());
                let id = fresh(format!("[{}{}]", arrows[a].id, arrows[b].id), &mut used);
                new_arrows.push(Arrow::new(id, arrows[a].src, arrows[b].tgt));
            }
        }
        let mut star = BTreeMap::new();
        for (x, a) in arrows.iter().enumerate() {
            if a.src == k || a.tgt == k {
                star.insert(x, new_arrows.len());
                let id = fresh(format!("{}*", a.id), &mut used);
                new_arrows.push(Arrow::new(id, a.tgt, a.src));
            }
        }
        let new_q = Quiver::from_arrows(q.n(), new_arrows, Some(q.labels().to_vec()), false)?;
        let mut out = Self::new(new_q, self.truncation())?;
        out.potential.dropped = self.potential.dropped;
        for (w, c) in &self.potential.terms {
            // rotate so the cycle starts away from k; then every visit to k
            // is an interior pair (incoming, outgoing)
            let start = (0..w.len()).find(|&p| arrows[w[p]].src != k).expect("no loops");
            let rot: Word = w[start..].iter().chain(&w[..start]).copied().collect();
            let mut word = Vec::with_capacity(rot.len());
            let mut p = 0;
            while p < rot.len() {
                let a = rot[p];
                if arrows[a].tgt == k {
                    word.push(composite[&(a, rot[p + 1])]);
                    p += 2;
                } else {
                    word.push(new_index[a]);
                    p += 1;
                }
            }
            out.add_term(&word, c.clone())?;
        }
        for &a in &incoming {
            for &b in &outgoing {
                out.add_term(&[composite[&(a, b)], star[&b], star[&a]], Rational::one())?;
            }
        }
        Ok(out)
    }

    /// Terms as `(coefficient, arrow ids)` in normal form order.
    pub fn id_terms(&self) -> Vec<(Rational, Vec<String>)> {
        self.potential.terms.iter().map(|(w, c)| (c.clone(), self.ids_of_word(w))).collect()
    }

    /// Human-readable potential such as `[bc]a + [bc]c*b*`.
    pub fn display_potential(&self) -> String {
        format_sum(self.potential.terms.iter().map(|(w, c)| (c, self.ids_of_word(w).concat())))
    }
}

/// `base`, primed until it is unused; the result is marked used.
fn fresh(base: String, used: &mut HashSet<String>) -> String {
    let mut id = base;
    while used.contains(&id) {
        id.push('\'');
    }
    used.insert(id.clone());
    id
}

/// Lexicographically smallest rotation under the given arrow ranks.
fn min_rotation(word: &[usize], ranks: &[usize]) -> Word {
    let n = word.len();
    let key = |r: usize| (0..n).map(move |t| ranks[word[(r + t) % n]]);
    let best = (0..n).min_by(|&x, &y| key(x).cmp(key(y))).unwrap_or(0);
    (0..n).map(|t| word[(best + t) % n]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    pub(crate) fn triangle_qp(with_potential: bool) -> QuiverWithPotential {
        let q = Quiver::from_arrows(
            3,
            vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 0)],
            None,
            true,
        )
        .unwrap();
        let terms: Vec<(Vec<&str>, Rational)> =
            if with_potential { vec![(vec!["a", "b", "c"], rat(1))] } else { vec![] };
        QuiverWithPotential::from_id_terms(q, &terms, DEFAULT_TRUNCATION).unwrap()
    }

    fn two_cycle_qp(terms: &[(Vec<&str>, Rational)]) -> QuiverWithPotential {
        let q = Quiver::from_arrows(2, vec![Arrow::new("x", 0, 1), Arrow::new("y", 1, 0)], None, false).unwrap();
        QuiverWithPotential::from_id_terms(q, terms, DEFAULT_TRUNCATION).unwrap()
    }

    fn ids(qp: &QuiverWithPotential, w: &[usize]) -> String {
        qp.ids_of_word(w).concat()
    }

    #[test]
    fn normalize_cycle_examples() {
        let p = triangle_qp(false);
        assert_eq!(ids(&p, &p.normalize_cycle(&[1, 2, 0]).unwrap()), "abc");
        assert_eq!(ids(&p, &p.normalize_cycle(&[0, 1, 2]).unwrap()), "abc");
        assert!(matches!(p.normalize_cycle(&[0, 1]), Err(QpError::NotClosed(_))));
    }

    #[test]
    fn cyclic_derivative_examples() {
        let p = triangle_qp(true);
        let d = p.cyclic_derivative(0);
        assert_eq!(d.display(p.quiver()), "bc");
        assert_eq!((d.src, d.tgt), (1, 0));
        let q = Quiver::from_arrows(
            3,
            vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 0), Arrow::new("d", 0, 2)],
            None,
            false,
        )
        .unwrap();
        let p = QuiverWithPotential::from_id_terms(q, &[(vec!["a", "b", "c"], rat(1))], 6).unwrap();
        assert!(p.cyclic_derivative(3).is_zero());
        let p = two_cycle_qp(&[(vec!["x", "y", "x", "y"], rat(1))]);
        assert_eq!(p.cyclic_derivative_by_id("x").unwrap().display(p.quiver()), "2 yxy");
        assert!(p.cyclic_derivative_by_id("z").is_err());
    }

    #[test]
    fn rotations_merge_and_cancel() {
        let mut p = triangle_qp(true);
        p.add_term(&[2, 0, 1], rat(-1)).unwrap();
        assert!(p.potential().is_zero());
        let mut p = triangle_qp(false).with_truncation(2).unwrap();
        p.add_term(&[0, 1, 2], rat(1)).unwrap();
        assert!(p.potential().is_zero());
        assert_eq!(p.potential().dropped(), 1);
    }

    #[test]
    fn restrict_examples() {
        let p = triangle_qp(true);
        let r = p.restrict(&[0, 1]).unwrap();
        assert_eq!(r.quiver().arrows().len(), 1);
        assert!(r.potential().is_zero());
        assert_eq!(p.restrict(&[0, 1, 2]).unwrap(), p);
        assert!(p.restrict(&[5]).is_err());
        // triangle plus a disjoint 2-cycle
        let q = Quiver::from_arrows(
            5,
            vec![
                Arrow::new("a", 0, 1),
                Arrow::new("b", 1, 2),
                Arrow::new("c", 2, 0),
                Arrow::new("x", 3, 4),
                Arrow::new("y", 4, 3),
            ],
            None,
            false,
        )
        .unwrap();
        let big = QuiverWithPotential::from_id_terms(q, &[(vec!["a", "b", "c"], rat(1)), (vec!["x", "y"], rat(1))], 12)
            .unwrap();
        let r = big.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(r.display_potential(), "abc");
        assert_eq!(r.quiver().arrows().len(), 3);
    }

    #[test]
    fn direct_sum_examples() {
        let p = triangle_qp(true);
        let empty = QuiverWithPotential::new(Quiver::from_arrows(3, vec![], None, true).unwrap(), 12).unwrap();
        assert_eq!(p.direct_sum(&empty).unwrap(), p);
        let a = QuiverWithPotential::new(Quiver::from_arrows(2, vec![Arrow::new("a", 0, 1)], None, true).unwrap(), 12)
            .unwrap();
        let s = a.direct_sum(&two_cycle_qp(&[(vec!["x", "y"], rat(1))])).unwrap();
        assert_eq!(s.quiver().arrows().len(), 3);
        assert_eq!(s.display_potential(), "xy");
        assert!(matches!(p.direct_sum(&p), Err(QpError::SharedArrow(_))));
        assert!(matches!(p.direct_sum(&a), Err(QpError::VertexCountMismatch(3, 2))));
    }

    #[test]
    fn right_equivalence_examples() {
        let p = triangle_qp(true);
        assert_eq!(p.apply_right_equivalence(&BTreeMap::new()).unwrap(), p);
        let phi = BTreeMap::from([(0, PathCombination::arrow(p.quiver(), 0).scaled(&rat(2)))]);
        assert_eq!(p.apply_right_equivalence(&phi).unwrap().display_potential(), "2 abc");
        let bad = BTreeMap::from([(0, PathCombination::arrow(p.quiver(), 1))]);
        assert!(matches!(p.apply_right_equivalence(&bad), Err(QpError::EndpointMismatch(_))));
        let singular = BTreeMap::from([(0, PathCombination::zero(0, 1))]);
        assert!(matches!(p.apply_right_equivalence(&singular), Err(QpError::SingularLinearPart(0, 1))));
    }

    #[test]
    fn right_equivalence_kills_cubic_term_after_premutation() {
        let pre = triangle_qp(true).premutate(2).unwrap();
        assert_eq!(pre.display_potential(), "[bc]a + [bc]c*b*");
        let q = pre.quiver();
        let (a, cs, bs) = (q.arrow_index("a").unwrap(), q.arrow_index("c*").unwrap(), q.arrow_index("b*").unwrap());
        // a -> a - c*b* turns a[bc] + [bc]c*b* into a[bc]
        let mut img = PathCombination::arrow(q, a);
        img.add_term(vec![cs, bs], rat(-1));
        let out = pre.apply_right_equivalence(&BTreeMap::from([(a, img)])).unwrap();
        assert_eq!(out.display_potential(), "[bc]a");
        // the opposite sign doubles the cubic term instead
        let mut img = PathCombination::arrow(q, a);
        img.add_term(vec![cs, bs], rat(1));
        let out = pre.apply_right_equivalence(&BTreeMap::from([(a, img)])).unwrap();
        assert_eq!(out.display_potential(), "[bc]a + 2 [bc]c*b*");
    }

    #[test]
    fn premutation_examples() {
        let pre = triangle_qp(true).premutate(2).unwrap();
        let shape: Vec<(String, usize, usize)> =
            pre.quiver().arrows().iter().map(|a| (a.id.clone(), a.src, a.tgt)).collect();
        assert_eq!(
            shape,
            vec![
                ("a".to_string(), 0, 1),
                ("[bc]".to_string(), 1, 0),
                ("b*".to_string(), 2, 1),
                ("c*".to_string(), 0, 2)
            ]
        );
        let pre0 = triangle_qp(false).premutate(2).unwrap();
        assert_eq!(pre0.display_potential(), "[bc]c*b*");
        assert_eq!(pre0.quiver().two_cycles(), vec![(0, 1)]);
        let k2 = QuiverWithPotential::new(Quiver::from_matrix(vec![vec![0, 2], vec![-2, 0]]).unwrap(), 12).unwrap();
        let pre = k2.premutate(1).unwrap();
        assert!(pre.potential().is_zero());
        assert!(pre.quiver().arrows().iter().all(|a| a.src == 1 && a.id.ends_with('*')));
        assert!(matches!(pre0.premutate(0), Err(QpError::TwoCycleAtVertex(0))));
    }

    #[test]
    fn premutation_handles_repeated_visits() {
        // a cycle through k twice, and an existing id that looks starred
        let q = Quiver::from_arrows(
            3,
            vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 0), Arrow::new("b*", 1, 2)],
            None,
            true,
        )
        .unwrap();
        let p = QuiverWithPotential::from_id_terms(q, &[(vec!["a", "b", "c", "a", "b*", "c"], rat(1))], 12).unwrap();
        let pre = p.premutate(2).unwrap();
        let ids: Vec<&str> = pre.quiver().arrows().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, vec!["a", "[bc]", "[b*c]", "b*", "c*", "b**"]);
        assert_eq!(pre.display_potential(), "[bc]c*b* + [b*c]a[bc]a + [b*c]c*b**");
    }
}
