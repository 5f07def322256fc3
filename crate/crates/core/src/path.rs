//! Paths and finite linear combinations of parallel paths.
//!
//! A path is a word of arrow indices read left to right: `[a, b]` is `a`
//! followed by `b`, so `tgt(a) = src(b)`. The empty word at a vertex is the
//! idempotent `e_i`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::field::{format_rational, Rational};
use crate::quiver::Quiver;

/// A word of arrow indices.
pub type Word = Vec<usize>;

/// Endpoints of a non-empty composable word, `None` if it is not a path.
pub fn path_endpoints(q: &Quiver, word: &[usize]) -> Option<(usize, usize)> {
    let (&first, &last) = (word.first()?, word.last()?);
    if word.iter().any(|&x| x >= q.arrows().len()) {
        return None;
    }
    for w in word.windows(2) {
        if q.arrow(w[0]).tgt != q.arrow(w[1]).src {
            return None;
        }
    }
    Some((q.arrow(first).src, q.arrow(last).tgt))
}

/// A linear combination of paths from `src` to `tgt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCombination {
    pub src: usize,
    pub tgt: usize,
    terms: BTreeMap<Word, Rational>,
}

impl PathCombination {
    pub fn zero(src: usize, tgt: usize) -> Self {
        PathCombination { src, tgt, terms: BTreeMap::new() }
    }

    /// The single arrow with index `a`.
    pub fn arrow(q: &Quiver, a: usize) -> Self {
        let arr = q.arrow(a);
        let mut c = Self::zero(arr.src, arr.tgt);
        c.terms.insert(vec![a], Rational::one());
        c
    }

    /// `coef * word`; `None` unless `word` is a path from `src` to `tgt`.
    pub fn monomial(q: &Quiver, src: usize, tgt: usize, word: Word, coef: Rational) -> Option<Self> {
        let ends = if word.is_empty() { (src == tgt).then_some((src, tgt)) } else { path_endpoints(q, &word) };
        if ends != Some((src, tgt)) {
            return None;
        }
        let mut c = Self::zero(src, tgt);
        c.add_term(word, coef);
        Some(c)
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `coef * word` without checking endpoints.
    pub fn add_term(&mut self, word: Word, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PathCombination, coef: &Rational) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * coef);
        }
    }

    pub fn scaled(&self, coef: &Rational) -> Self {
        let mut out = Self::zero(self.src, self.tgt);
        out.add_scaled(self, coef);
        out
    }

    /// Coefficient of the single-arrow word `[a]`.
    pub fn linear_coefficient(&self, a: usize) -> Rational {
        self.terms.get(&vec![a]).cloned().unwrap_or_else(Rational::zero)
    }

    /// Smallest word length occurring, `None` for zero.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Concatenation `self` followed by `other`, dropping words longer than
    /// `max_len`. Mismatched endpoints give zero.
    pub fn then(&self, other: &PathCombination, max_len: usize) -> PathCombination {
        let mut out = PathCombination::zero(self.src, other.tgt);
        if self.tgt != other.src {
            return out;
        }
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                if u.len() + v.len() > max_len {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, cu * cv);
            }
        }
        out
    }

    pub fn truncated(&self, max_len: usize) -> PathCombination {
        let mut out = PathCombination::zero(self.src, self.tgt);
        for (w, c) in &self.terms {
            if w.len() <= max_len {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Substitute `images[a]` for each arrow `a`, keeping words of length at
    /// most `max_len`.
    pub fn substitute(&self, images: &[PathCombination], max_len: usize) -> PathCombination {
        let mut out = PathCombination::zero(self.src, self.tgt);
        for (w, c) in &self.terms {
            for (v, cv) in expand_word(w, images, max_len) {
                out.add_term(v, cv * c);
            }
        }
        out
    }

    /// Terms as `(coefficient, arrow ids)`, in word order.
    pub fn to_id_terms(&self, q: &Quiver) -> Vec<(String, Vec<String>)> {
        self.terms
            .iter()
            .map(|(w, c)| (format_rational(c), w.iter().map(|&a| q.arrow(a).id.clone()).collect()))
            .collect()
    }

    /// Human-readable form such as `a - 2 c*b*`, with `e1` for idempotents.
    pub fn display(&self, q: &Quiver) -> String {
        format_sum(self.terms.iter().map(|(w, c)| {
            let word = if w.is_empty() {
                format!("e{}", self.src + 1)
            } else {
                w.iter().map(|&a| q.arrow(a).id.as_str()).collect::<String>()
            };
            (c, word)
        }))
    }
}

/// Render `Σ c w` as `w1 - 2 w2 + 1/2 w3`; the empty sum is `0`.
pub fn format_sum<'a>(terms: impl Iterator<Item = (&'a Rational, String)>) -> String {
    let mut out = String::new();
    for (c, word) in terms {
        let negative = c.is_negative();
        let abs = c.abs();
        let body = if abs.is_one() { word } else { format!("{} {}", format_rational(&abs), word) };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Expand the product of `images` along `word`, dropping words longer than
/// `max_len` as soon as they appear.
pub fn expand_word(word: &[usize], images: &[PathCombination], max_len: usize) -> BTreeMap<Word, Rational> {
    let mut acc: BTreeMap<Word, Rational> = BTreeMap::from([(Vec::new(), Rational::one())]);
    for &a in word {
        let mut next: BTreeMap<Word, Rational> = BTreeMap::new();
        for (u, cu) in &acc {
            for (v, cv) in images[a].terms() {
                if u.len() + v.len() > max_len {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                let e = next.entry(w).or_insert_with(Rational::zero);
                *e += cu * cv;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::quiver::Arrow;

    fn triangle() -> Quiver {
        Quiver::from_arrows(3, vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 0)], None, true)
            .unwrap()
    }

    #[test]
    fn endpoints_of_paths() {
        let q = triangle();
        assert_eq!(path_endpoints(&q, &[0, 1]), Some((0, 2)));
        assert_eq!(path_endpoints(&q, &[0, 1, 2]), Some((0, 0)));
        assert_eq!(path_endpoints(&q, &[1, 0]), None);
        assert_eq!(path_endpoints(&q, &[]), None);
    }

    #[test]
    fn arithmetic_cancels_zero_terms() {
        let q = triangle();
        let mut x = PathCombination::monomial(&q, 0, 2, vec![0, 1], rat(2)).unwrap();
        x.add_term(vec![0, 1], rat(-2));
        assert!(x.is_zero());
        assert!(PathCombination::monomial(&q, 0, 1, vec![0, 1], rat(1)).is_none());
        assert!(PathCombination::monomial(&q, 1, 1, vec![], rat(1)).is_some());
    }

    #[test]
    fn concatenation_and_substitution() {
        let q = triangle();
        let a = PathCombination::arrow(&q, 0);
        let b = PathCombination::arrow(&q, 1);
        let ab = a.then(&b, 4);
        assert_eq!(ab.terms().keys().collect::<Vec<_>>(), vec![&vec![0, 1]]);
        assert!(b.then(&a, 4).is_zero());
        assert!(a.then(&b, 1).is_zero());
        // a -> 2a, others fixed: ab -> 2ab
        let mut images: Vec<PathCombination> = (0..3).map(|x| PathCombination::arrow(&q, x)).collect();
        images[0] = a.scaled(&rat(2));
        let s = ab.substitute(&images, 4);
        assert_eq!(s.terms().get(&vec![0, 1]), Some(&rat(2)));
        assert_eq!(s.display(&q), "2 ab");
    }
}
