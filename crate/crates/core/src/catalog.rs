//! Simply-laced Dynkin and affine (extended Dynkin) diagrams.
//!
//! Each diagram has a fixed vertex numbering (the template below) and is
//! recognized on arbitrary quivers structurally: the underlying multigraph is
//! reduced to its branch data (degrees, arm lengths), which determines the
//! diagram up to isomorphism.
//!
//! Templates, 0-based:
//! - `A_n`: path `0 - 1 - ... - (n-1)`.
//! - `D_n`: leaves `0`, `1` on `2`, then the path `2 - 3 - ... - (n-1)`.
//! - `E_n`: path `0 - ... - (n-2)` with a pendant `n-1` attached at `2`.
//! - `A_n^(1)`: cycle on `n+1` vertices (for `n = 1`, a double edge).
//! - `D_n^(1)`: leaves `0`, `1` on `2`, path `2 - ... - (n-2)`, leaves `n-1`, `n` on `n-2`.
//! - `E_6^(1)`: center `0` with arms `0-1-2`, `0-3-4`, `0-5-6`.
//! - `E_7^(1)`: path `0 - ... - 6` with a pendant `7` at `3`.
//! - `E_8^(1)`: path `0 - ... - 7` with a pendant `8` at `2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::quiver::{Arrow, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::D => "D",
            Series::E => "E",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiagramKind {
    Dynkin,
    Affine,
}

/// A catalog diagram. `rank` is the subscript: `A_3` has three vertices,
/// `A_3^(1)` has four.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagram {
    pub kind: DiagramKind,
    pub series: Series,
    pub rank: usize,
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DiagramKind::Dynkin => write!(f, "Dynkin {}_{}", self.series, self.rank),
            DiagramKind::Affine => write!(f, "Affine {}_{}^(1)", self.series, self.rank),
        }
    }
}

impl Diagram {
    pub fn dynkin(series: Series, rank: usize) -> Option<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
        };
        ok.then_some(Diagram { kind: DiagramKind::Dynkin, series, rank })
    }

    pub fn affine(series: Series, rank: usize) -> Option<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
        };
        ok.then_some(Diagram { kind: DiagramKind::Affine, series, rank })
    }

    pub fn vertex_count(&self) -> usize {
        match self.kind {
            DiagramKind::Dynkin => self.rank,
            DiagramKind::Affine => self.rank + 1,
        }
    }

    /// Edges of the template, each listed once per multiplicity.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        let path = |len: usize| (0..len.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
        match (self.kind, self.series) {
            (DiagramKind::Dynkin, Series::A) => path(n),
            (DiagramKind::Dynkin, Series::D) => {
                let mut e = vec![(0, 2), (1, 2)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
            (DiagramKind::Dynkin, Series::E) => {
                let mut e = path(n - 1);
                e.push((2, n - 1));
                e
            }
            (DiagramKind::Affine, Series::A) => {
                if n == 1 {
                    vec![(0, 1), (0, 1)]
                } else {
                    let mut e = path(n + 1);
                    e.push((n, 0));
                    e
                }
            }
            (DiagramKind::Affine, Series::D) => {
                let mut e = vec![(0, 2), (1, 2)];
                e.extend((2..n - 2).map(|i| (i, i + 1)));
                e.push((n - 2, n - 1));
                e.push((n - 2, n));
                e
            }
            (DiagramKind::Affine, Series::E) => match n {
                6 => vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
                7 => {
                    let mut e = path(7);
                    e.push((3, 7));
                    e
                }
                _ => {
                    let mut e = path(8);
                    e.push((2, 8));
                    e
                }
            },
        }
    }

    /// The template oriented edge by edge: edge `e = (u, v)` becomes `u -> v`
    /// when `forward[e]`, else `v -> u`.
    pub fn orient(&self, forward: &[bool]) -> Quiver {
        let arrows = self
            .edges()
            .into_iter()
            .zip(forward.iter().chain(std::iter::repeat(&true)))
            .enumerate()
            .map(|(x, ((u, v), &fw))| {
                let (s, t) = if fw { (u, v) } else { (v, u) };
                Arrow::new(format!("a{}", x + 1), s, t)
            })
            .collect();
        Quiver::from_arrows(self.vertex_count(), arrows, None, true).expect("catalog orientations are valid")
    }
}

/// Every catalog diagram with at most `max_vertices` vertices.
pub fn catalog(max_vertices: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    for kind in [DiagramKind::Dynkin, DiagramKind::Affine] {
        for series in [Series::A, Series::D, Series::E] {
            for rank in 1..=max_vertices {
                let d = match kind {
                    DiagramKind::Dynkin => Diagram::dynkin(series, rank),
                    DiagramKind::Affine => Diagram::affine(series, rank),
                };
                if let Some(d) = d.filter(|d| d.vertex_count() <= max_vertices) {
                    out.push(d);
                }
            }
        }
    }
    out
}

/// Identify the underlying multigraph of an exchange matrix with a catalog
/// diagram. Orientation is ignored; callers check acyclicity separately.
pub fn recognize(b: &[Vec<i64>]) -> Option<Diagram> {
    let v = b.len();
    if v == 0 {
        return None;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); v];
    let mut edges = 0usize;
    for i in 0..v {
        for j in (i + 1)..v {
            match b[i][j].abs() {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                    edges += 1;
                }
                2 if v == 2 => return Diagram::affine(Series::A, 1),
                _ => return None,
            }
        }
    }
    if !connected(&adj) {
        return None;
    }
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    if edges == v {
        return (v >= 3 && deg.iter().all(|&d| d == 2)).then(|| Diagram::affine(Series::A, v - 1)).flatten();
    }
    if edges + 1 != v {
        return None;
    }
    let branch: Vec<usize> = (0..v).filter(|&x| deg[x] >= 3).collect();
    match branch.as_slice() {
        [] => Diagram::dynkin(Series::A, v),
        [c] if deg[*c] == 4 => (v == 5).then(|| Diagram::affine(Series::D, 4)).flatten(),
        [c] if deg[*c] == 3 => {
            let mut arms: Vec<usize> = adj[*c].iter().map(|&w| arm_length(&adj, *c, w)).collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Diagram::dynkin(Series::D, v),
                [1, 2, 2] => Diagram::dynkin(Series::E, 6),
                [1, 2, 3] => Diagram::dynkin(Series::E, 7),
                [1, 2, 4] => Diagram::dynkin(Series::E, 8),
                [2, 2, 2] => Diagram::affine(Series::E, 6),
                [1, 3, 3] => Diagram::affine(Series::E, 7),
                [1, 2, 5] => Diagram::affine(Series::E, 8),
                _ => None,
            }
        }
        [c1, c2] if deg[*c1] == 3 && deg[*c2] == 3 => {
            let two_leaves = |c: usize| adj[c].iter().filter(|&&w| deg[w] == 1).count() == 2;
            (two_leaves(*c1) && two_leaves(*c2)).then(|| Diagram::affine(Series::D, v - 1)).flatten()
        }
        _ => None,
    }
}

/// Number of vertices on the arm leaving `center` through `first`, in a tree.
fn arm_length(adj: &[Vec<usize>], center: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (center, first, 1);
    while adj[cur].len() == 2 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        len += 1;
    }
    len
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
