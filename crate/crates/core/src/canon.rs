//! Relabeling-invariant canonical forms of exchange matrices.
//!
//! Vertices are first colored by iterated neighborhood refinement (a
//! relabeling-equivariant invariant), then the lexicographically smallest
//! upper triangle is found over all permutations that list the color classes
//! in order. Both steps commute with relabeling, so the result is a complete
//! invariant of the quiver up to vertex renumbering.

use crate::quiver::{Quiver, QuiverError};

/// Largest vertex count accepted by [`canonical_form`].
pub const MAX_CANONICAL_VERTICES: usize = 9;

/// Canonical representative of a quiver's isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// `perm[p]` is the original vertex placed at position `p`.
    pub perm: Vec<usize>,
    /// `matrix[p][q] = b[perm[p]][perm[q]]`.
    pub matrix: Vec<Vec<i64>>,
}

impl CanonicalForm {
    /// Compact hash key: the strict upper triangle, column by column.
    pub fn key(&self) -> Vec<i64> {
        upper_key(&self.matrix)
    }
}

fn upper_key(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mut key = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for t in 0..n {
        for s in 0..t {
            key.push(m[s][t]);
        }
    }
    key
}

pub fn canonical_form(q: &Quiver) -> Result<CanonicalForm, QuiverError> {
    canonical_form_of_matrix(q.exchange_matrix())
}

pub fn canonical_form_of_matrix(b: &[Vec<i64>]) -> Result<CanonicalForm, QuiverError> {
    let n = b.len();
    if n > MAX_CANONICAL_VERTICES {
        return Err(QuiverError::TooLarge { n, max: MAX_CANONICAL_VERTICES });
    }
    let colors = refine_colors(b);
    let mut slot_colors: Vec<usize> = colors.clone();
    slot_colors.sort_unstable();
    let mut search = Search {
        b,
        colors: &colors,
        slot_colors,
        used: vec![false; n],
        perm: Vec::with_capacity(n),
        key: Vec::new(),
        best_key: None,
        best_perm: Vec::new(),
    };
    search.run(0, false);
    let perm = search.best_perm;
    let matrix = (0..n).map(|p| (0..n).map(|q| b[perm[p]][perm[q]]).collect()).collect();
    Ok(CanonicalForm { perm, matrix })
}

/// Stable coloring by iterated refinement on signed neighbor multisets.
fn refine_colors(b: &[Vec<i64>]) -> Vec<usize> {
    let n = b.len();
    let mut colors = vec![0usize; n];
    let mut classes = usize::from(n > 0);
    loop {
        let sigs: Vec<(usize, Vec<(i64, usize)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(i64, usize)> =
                    (0..n).filter(|&w| w != v && b[v][w] != 0).map(|w| (b[v][w], colors[w])).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colors = sigs.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

struct Search<'a> {
    b: &'a [Vec<i64>],
    colors: &'a [usize],
    slot_colors: Vec<usize>,
    used: Vec<bool>,
    perm: Vec<usize>,
    key: Vec<i64>,
    best_key: Option<Vec<i64>>,
    best_perm: Vec<usize>,
}

impl Search<'_> {
    /// `below` records that the current prefix is already strictly smaller
    /// than the best key's prefix.
    fn run(&mut self, t: usize, below: bool) {
        let n = self.b.len();
        if t == n {
            if self.best_key.is_none() || below {
                self.best_key = Some(self.key.clone());
                self.best_perm = self.perm.clone();
            }
            return;
        }
        for v in 0..n {
            if self.used[v] || self.colors[v] != self.slot_colors[t] {
                continue;
            }
            let start = self.key.len();
            for s in 0..t {
                self.key.push(self.b[self.perm[s]][v]);
            }
            let mut next_below = below;
            let mut prune = false;
            if !below {
                if let Some(best) = &self.best_key {
                    match self.key[start..].cmp(&best[start..self.key.len()]) {
                        std::cmp::Ordering::Less => next_below = true,
                        std::cmp::Ordering::Greater => prune = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            if !prune {
                self.used[v] = true;
                self.perm.push(v);
                self.run(t + 1, next_below);
                self.perm.pop();
                self.used[v] = false;
            }
            self.key.truncate(start);
        }
    }
}

/// Brute-force canonical key over all `n!` permutations; a test oracle for
/// the refined search.
#[cfg(test)]
pub(crate) fn brute_force_key(b: &[Vec<i64>]) -> Vec<i64> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = b.len();
    permutations(n)
        .into_iter()
        .map(|perm| {
            let m: Vec<Vec<i64>> = (0..n).map(|p| (0..n).map(|q| b[perm[p]][perm[q]]).collect()).collect();
            upper_key(&m)
        })
        .min()
        .unwrap_or_default()
}
