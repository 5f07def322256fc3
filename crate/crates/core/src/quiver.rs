//! Quivers without loops, given by a skew-symmetric exchange matrix together
//! with an explicit labeled arrow list.
//!
//! Vertices are 0-based internally; file formats and the CLI use 1-based
//! vertex numbers. `b[i][j]` is the number of arrows `i -> j` minus the number
//! of arrows `j -> i`. The arrow list can carry 2-cycles (premutation creates
//! them); the exchange matrix then only records the net count.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("exchange matrix is not square")]
    NotSquare,
    #[error("exchange matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("2-cycle between vertices {0} and {1}")]
    TwoCycle(usize, usize),
    #[error("vertex {0} out of range (quiver has {1} vertices)")]
    VertexOutOfRange(usize, usize),
    #[error("duplicate arrow id {0:?}")]
    DuplicateArrowId(String),
    #[error("arrow list disagrees with exchange matrix at ({0}, {1})")]
    InconsistentArrows(usize, usize),
    #[error("label list has {0} entries, expected {1}")]
    LabelCount(usize, usize),
    #[error("canonical form is limited to {max} vertices, quiver has {n}")]
    TooLarge { n: usize, max: usize },
}

/// A labeled arrow `src -> tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

impl Arrow {
    pub fn new(id: impl Into<String>, src: usize, tgt: usize) -> Self {
        Arrow { id: id.into(), src, tgt }
    }
}

/// A finite quiver without loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    b: Vec<Vec<i64>>,
    arrows: Vec<Arrow>,
    labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Arrows realizing a 2-cycle-free exchange matrix, with ids `a1, a2, ...`
/// in row-major order of the positive entries.
fn arrows_from_matrix(b: &[Vec<i64>]) -> Vec<Arrow> {
    let mut arrows = Vec::new();
    for (i, row) in b.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            for _ in 0..v.max(0) {
                arrows.push(Arrow::new(format!("a{}", arrows.len() + 1), i, j));
            }
        }
    }
    arrows
}

impl Quiver {
    /// Quiver of a skew-symmetric integer matrix with zero diagonal.
    pub fn from_matrix(b: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        let n = b.len();
        Self::from_matrix_with_labels(b, default_labels(n))
    }

    pub fn from_matrix_with_labels(b: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self, QuiverError> {
        validate_matrix(&b)?;
        if labels.len() != b.len() {
            return Err(QuiverError::LabelCount(labels.len(), b.len()));
        }
        let arrows = arrows_from_matrix(&b);
        Ok(Quiver { b, arrows, labels })
    }

    /// Quiver on `n` vertices from an explicit arrow list. With
    /// `two_cycle_free` set, opposite arrows between a pair are rejected.
    pub fn from_arrows(
        n: usize,
        arrows: Vec<Arrow>,
        labels: Option<Vec<String>>,
        two_cycle_free: bool,
    ) -> Result<Self, QuiverError> {
        let labels = labels.unwrap_or_else(|| default_labels(n));
        if labels.len() != n {
            return Err(QuiverError::LabelCount(labels.len(), n));
        }
        let mut b = vec![vec![0i64; n]; n];
        let mut seen = HashSet::new();
        for a in &arrows {
            for v in [a.src, a.tgt] {
                if v >= n {
                    return Err(QuiverError::VertexOutOfRange(v, n));
                }
            }
            if a.src == a.tgt {
                return Err(QuiverError::Loop(a.src));
            }
            if !seen.insert(a.id.as_str()) {
                return Err(QuiverError::DuplicateArrowId(a.id.clone()));
            }
            b[a.src][a.tgt] += 1;
            b[a.tgt][a.src] -= 1;
        }
        let q = Quiver { b, arrows, labels };
        if two_cycle_free {
            if let Some(&(i, j)) = q.two_cycles().first() {
                return Err(QuiverError::TwoCycle(i, j));
            }
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn exchange_matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, idx: usize) -> &Arrow {
        &self.arrows[idx]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Arrow indices from `i` to `j`, in list order.
    pub fn arrows_between(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&x| self.arrows[x].src == i && self.arrows[x].tgt == j).collect()
    }

    /// Position of each arrow in the lexicographic order of arrow ids.
    pub fn arrow_id_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.arrows.len()).collect();
        order.sort_by(|&x, &y| self.arrows[x].id.cmp(&self.arrows[y].id));
        let mut ranks = vec![0; order.len()];
        for (r, &x) in order.iter().enumerate() {
            ranks[x] = r;
        }
        ranks
    }

    /// Unordered vertex pairs `(i, j)`, `i < j`, joined by arrows in both directions.
    pub fn two_cycles(&self) -> Vec<(usize, usize)> {
        let mut forward = BTreeSet::new();
        for a in &self.arrows {
            forward.insert((a.src, a.tgt));
        }
        forward.iter().filter(|&&(i, j)| i < j && forward.contains(&(j, i))).copied().collect()
    }

    pub fn has_two_cycles(&self) -> bool {
        !self.two_cycles().is_empty()
    }

    /// Is `k` on a 2-cycle?
    pub fn on_two_cycle(&self, k: usize) -> bool {
        self.two_cycles().iter().any(|&(i, j)| i == k || j == k)
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.b.iter().flatten().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// True iff there is no oriented cycle.
    pub fn is_acyclic(&self) -> bool {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.tgt] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.tgt] -= 1;
                if indeg[a.tgt] == 0 {
                    stack.push(a.tgt);
                }
            }
        }
        removed == n
    }

    fn check_vertex(&self, k: usize) -> Result<(), QuiverError> {
        if k >= self.n() {
            Err(QuiverError::VertexOutOfRange(k, self.n()))
        } else {
            Ok(())
        }
    }

    /// Mutation at `k`, computed on the exchange matrix. The arrow list of
    /// the result is regenerated with fresh ids; labels are kept.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        self.check_vertex(k)?;
        if let Some(&(i, j)) = self.two_cycles().first() {
            return Err(QuiverError::TwoCycle(i, j));
        }
        let b = mutate_matrix(&self.b, k);
        Ok(Quiver { arrows: arrows_from_matrix(&b), b, labels: self.labels.clone() })
    }

    /// Full subquiver on the vertex set `subset` (sorted and deduplicated).
    /// Arrow ids and vertex labels are preserved.
    pub fn full_subquiver(&self, subset: &[usize]) -> Result<Quiver, QuiverError> {
        let (verts, pos) = self.subset_positions(subset)?;
        let arrows = self
            .arrows
            .iter()
            .filter_map(|a| match (pos[a.src], pos[a.tgt]) {
                (Some(s), Some(t)) => Some(Arrow::new(a.id.clone(), s, t)),
                _ => None,
            })
            .collect();
        let labels = verts.iter().map(|&v| self.labels[v].clone()).collect();
        Quiver::from_arrows(verts.len(), arrows, Some(labels), false)
    }

    /// Sorted subset and the map old vertex -> new position.
    pub(crate) fn subset_positions(&self, subset: &[usize]) -> Result<(Vec<usize>, Vec<Option<usize>>), QuiverError> {
        let verts: Vec<usize> = subset.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        for &v in &verts {
            self.check_vertex(v)?;
        }
        let mut pos = vec![None; self.n()];
        for (p, &v) in verts.iter().enumerate() {
            pos[v] = Some(p);
        }
        Ok((verts, pos))
    }

    /// Connectivity of the underlying undirected graph. The empty quiver
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (ra, rb) = (find(&mut parent, a.src), find(&mut parent, a.tgt));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut root_slot = vec![usize::MAX; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if root_slot[r] == usize::MAX {
                root_slot[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[root_slot[r]].push(v);
        }
        comps
    }

    /// The quiver with vertices renumbered: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Quiver {
        let n = self.n();
        let mut b = vec![vec![0; n]; n];
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                b[perm[i]][perm[j]] = self.b[i][j];
            }
        }
        let arrows = self.arrows.iter().map(|a| Arrow::new(a.id.clone(), perm[a.src], perm[a.tgt])).collect();
        Quiver { b, arrows, labels }
    }
}

fn validate_matrix(b: &[Vec<i64>]) -> Result<(), QuiverError> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) {
        return Err(QuiverError::NotSquare);
    }
    for i in 0..n {
        if b[i][i] != 0 {
            return Err(QuiverError::Loop(i));
        }
        for j in (i + 1)..n {
            if b[i][j] != -b[j][i] {
                return Err(QuiverError::NotSkewSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// Matrix mutation at `k`: entries in row/column `k` flip sign, every path
/// `i -> k -> j` contributes `b[i][k] * b[k][j]` to `b[i][j]`.
pub fn mutate_matrix(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut out = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Quiver {
        Quiver::from_arrows(3, vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 0)], None, true)
            .unwrap()
    }

    fn linear_a3() -> Quiver {
        Quiver::from_matrix(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap()
    }

    fn arrow_pairs(q: &Quiver) -> BTreeSet<(usize, usize)> {
        q.arrows().iter().map(|a| (a.src, a.tgt)).collect()
    }

    #[test]
    fn kronecker_from_matrix() {
        let k2 = Quiver::from_matrix(vec![vec![0, 2], vec![-2, 0]]).unwrap();
        assert_eq!(k2.arrows().len(), 2);
        assert!(k2.arrows().iter().all(|a| a.src == 0 && a.tgt == 1));
        assert_eq!(k2.arrows()[0].id, "a1");
    }

    #[test]
    fn triangle_from_arrows() {
        assert_eq!(triangle().exchange_matrix(), &[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Quiver::from_matrix(vec![vec![0, 1], vec![1, 0]]), Err(QuiverError::NotSkewSymmetric(0, 1)));
        assert_eq!(Quiver::from_arrows(2, vec![Arrow::new("x", 1, 1)], None, false), Err(QuiverError::Loop(1)));
        let two_cycle = vec![Arrow::new("x", 0, 1), Arrow::new("y", 1, 0)];
        assert_eq!(Quiver::from_arrows(2, two_cycle.clone(), None, true), Err(QuiverError::TwoCycle(0, 1)));
        let q = Quiver::from_arrows(2, two_cycle, None, false).unwrap();
        assert_eq!(q.exchange_matrix(), &[vec![0, 0], vec![0, 0]]);
        assert!(q.has_two_cycles());
        assert!(Quiver::from_arrows(2, vec![Arrow::new("x", 0, 1), Arrow::new("x", 0, 1)], None, false).is_err());
    }

    #[test]
    fn mutate_linear_a3_at_middle() {
        let m = linear_a3().mutate(1).unwrap();
        assert_eq!(arrow_pairs(&m), [(1, 0), (2, 1), (0, 2)].into_iter().collect());
    }

    #[test]
    fn mutate_triangle_at_first_vertex() {
        let m = triangle().mutate(0).unwrap();
        assert_eq!(arrow_pairs(&m), [(1, 0), (0, 2)].into_iter().collect());
        assert_eq!(m.arrows().len(), 2);
    }

    #[test]
    fn kronecker_mutation_is_involutive() {
        let k2 = Quiver::from_matrix(vec![vec![0, 2], vec![-2, 0]]).unwrap();
        let m = k2.mutate(0).unwrap();
        assert!(m.arrows().iter().all(|a| a.src == 1 && a.tgt == 0));
        assert_eq!(m.mutate(0).unwrap(), k2);
    }

    #[test]
    fn mutate_errors() {
        assert_eq!(triangle().mutate(5), Err(QuiverError::VertexOutOfRange(5, 3)));
        let q = Quiver::from_arrows(2, vec![Arrow::new("x", 0, 1), Arrow::new("y", 1, 0)], None, false).unwrap();
        assert_eq!(q.mutate(0), Err(QuiverError::TwoCycle(0, 1)));
    }

    #[test]
    fn full_subquivers() {
        let t = triangle();
        let sub = t.full_subquiver(&[0, 1]).unwrap();
        assert_eq!(sub.arrows(), &[Arrow::new("a", 0, 1)]);
        assert_eq!(t.full_subquiver(&[2, 1, 0]).unwrap(), t);
        let k3 = Quiver::from_matrix(vec![vec![0, 3], vec![-3, 0]]).unwrap();
        assert_eq!(k3.full_subquiver(&[0, 1]).unwrap(), k3);
        assert_eq!(t.full_subquiver(&[3]), Err(QuiverError::VertexOutOfRange(3, 3)));
        assert_eq!(sub.labels(), &["1".to_string(), "2".to_string()]);
    }

    #[test]
    fn connectivity() {
        assert!(triangle().is_connected());
        assert!(linear_a3().is_connected());
        let two = Quiver::from_matrix(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(two.components(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn acyclicity() {
        assert!(!triangle().is_acyclic());
        assert!(linear_a3().is_acyclic());
    }
}
