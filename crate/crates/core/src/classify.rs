//! Mutation-type classification by breadth-first search over the mutation
//! class, and location of a non-Dynkin core subquiver.
//!
//! The search relies on two classical facts about mutation classes: quivers
//! of Dynkin type only ever carry exchange entries in `{0, ±1}`, and an entry
//! of absolute value at least 3 on three or more vertices forces an infinite
//! mutation class. Dynkin and affine classes are recognized by meeting an
//! acyclic quiver whose underlying diagram is in the catalog.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::canon::canonical_form_of_matrix;
use crate::catalog::{recognize, Diagram, DiagramKind, Series};
use crate::quiver::{mutate_matrix, Quiver, QuiverError};

pub const DEFAULT_BUDGET: usize = 200_000;
/// Number of canonical matrices kept in a [`ClassReport`].
pub const REPRESENTATIVE_SAMPLE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("quiver is not connected")]
    Disconnected,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("no affine or K_m full subquiver found in a non-Dynkin quiver")]
    NoCore,
    #[error("mutation class search exceeded its budget of {budget} canonical forms")]
    BudgetExhausted { budget: usize },
}

pub type ClassifyResult<T> = Result<T, ClassifyError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationType {
    Dynkin(Series, usize),
    Affine(Series, usize),
    MutationFiniteOther,
    MutationInfinite,
}

impl MutationType {
    pub fn is_dynkin(&self) -> bool {
        matches!(self, MutationType::Dynkin(..))
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, MutationType::Affine(..))
    }

    fn from_diagram(d: Diagram) -> Self {
        match d.kind {
            DiagramKind::Dynkin => MutationType::Dynkin(d.series, d.rank),
            DiagramKind::Affine => MutationType::Affine(d.series, d.rank),
        }
    }

    pub fn diagram(&self) -> Option<Diagram> {
        match *self {
            MutationType::Dynkin(s, r) => Diagram::dynkin(s, r),
            MutationType::Affine(s, r) => Diagram::affine(s, r),
            _ => None,
        }
    }
}

impl fmt::Display for MutationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.diagram() {
            Some(d) => d.fmt(f),
            None if *self == MutationType::MutationInfinite => f.write_str("MutationInfinite"),
            None => f.write_str("MutationFiniteOther"),
        }
    }
}

impl Serialize for MutationType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Result of [`classify`]. Dynkin and affine results carry the witness: the
/// mutation sequence (0-based vertices) taking the input to an acyclic
/// catalog quiver, and that quiver.
#[derive(Clone, Debug)]
pub struct Classification {
    pub mutation_type: MutationType,
    pub witness: Option<(Vec<usize>, Quiver)>,
    pub visited: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AbortReason {
    #[serde(rename = "entryGE2")]
    EntryGe2,
    #[serde(rename = "entryGE3")]
    EntryGe3,
    #[serde(rename = "budget")]
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub visited: usize,
    pub abort_reason: Option<AbortReason>,
    /// Canonical exchange matrices of the first classes reached.
    pub representatives: Vec<Vec<Vec<i64>>>,
}

fn check_input(q: &Quiver) -> ClassifyResult<()> {
    if let Some(&(i, j)) = q.two_cycles().first() {
        return Err(QuiverError::TwoCycle(i, j).into());
    }
    Ok(())
}

fn max_entry(b: &[Vec<i64>]) -> i64 {
    b.iter().flatten().map(|v| v.abs()).max().unwrap_or(0)
}

/// Breadth-first closure of the mutation class, deduplicated by canonical
/// form. Stops at the first exchange entry of absolute value 3 or more, and
/// with `stop_at_entry_2` also at the first entry equal to 2.
pub fn mutation_class_bfs(q: &Quiver, budget: usize, stop_at_entry_2: bool) -> ClassifyResult<ClassReport> {
    check_input(q)?;
    let start = q.exchange_matrix().to_vec();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut report = ClassReport { visited: 0, abort_reason: None, representatives: Vec::new() };
    let cf = canonical_form_of_matrix(&start)?;
    seen.insert(cf.key());
    report.visited = 1;
    report.representatives.push(cf.matrix);
    queue.push_back(start);
    while let Some(b) = queue.pop_front() {
        let m = max_entry(&b);
        if m >= 3 {
            report.abort_reason = Some(AbortReason::EntryGe3);
            return Ok(report);
        }
        if m == 2 && stop_at_entry_2 {
            report.abort_reason = Some(AbortReason::EntryGe2);
            return Ok(report);
        }
        for k in 0..b.len() {
            let next = mutate_matrix(&b, k);
            let cf = canonical_form_of_matrix(&next)?;
            if seen.insert(cf.key()) {
                if seen.len() > budget {
                    report.abort_reason = Some(AbortReason::Budget);
                    return Ok(report);
                }
                report.visited = seen.len();
                if report.representatives.len() < REPRESENTATIVE_SAMPLE {
                    report.representatives.push(cf.matrix);
                }
                queue.push_back(next);
            }
        }
    }
    Ok(report)
}

pub fn classify(q: &Quiver) -> ClassifyResult<Classification> {
    classify_with_budget(q, DEFAULT_BUDGET)
}

pub fn classify_with_budget(q: &Quiver, budget: usize) -> ClassifyResult<Classification> {
    check_input(q)?;
    if !q.is_connected() {
        return Err(ClassifyError::Disconnected);
    }
    let n = q.n();
    let plain = |t: MutationType| Classification { mutation_type: t, witness: None, visited: 1 };
    match n {
        0 => return Err(ClassifyError::Disconnected),
        1 => {
            return Ok(Classification {
                mutation_type: MutationType::Dynkin(Series::A, 1),
                witness: Some((Vec::new(), q.clone())),
                visited: 1,
            })
        }
        2 => {
            let t = match q.entry(0, 1).abs() {
                1 => MutationType::Dynkin(Series::A, 2),
                2 => MutationType::Affine(Series::A, 1),
                _ => return Ok(plain(MutationType::MutationInfinite)),
            };
            return Ok(Classification { mutation_type: t, witness: Some((Vec::new(), q.clone())), visited: 1 });
        }
        _ => {}
    }
    let start = q.exchange_matrix().to_vec();
    if let Some(t) = catalog_match(&start) {
        return Ok(Classification { mutation_type: t, witness: Some((Vec::new(), q.clone())), visited: 1 });
    }
    if max_entry(&start) >= 3 {
        return Ok(plain(MutationType::MutationInfinite));
    }
    let mut seen = HashSet::new();
    seen.insert(canonical_form_of_matrix(&start)?.key());
    let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
    while let Some((b, seq)) = queue.pop_front() {
        for k in 0..n {
            if seq.last() == Some(&k) {
                continue;
            }
            let next = mutate_matrix(&b, k);
            if !seen.insert(canonical_form_of_matrix(&next)?.key()) {
                continue;
            }
            let visited = seen.len();
            if max_entry(&next) >= 3 {
                return Ok(Classification { mutation_type: MutationType::MutationInfinite, witness: None, visited });
            }
            let mut next_seq = seq.clone();
            next_seq.push(k);
            if let Some(t) = catalog_match(&next) {
                let rep = Quiver::from_matrix_with_labels(next, q.labels().to_vec())?;
                return Ok(Classification { mutation_type: t, witness: Some((next_seq, rep)), visited });
            }
            if visited > budget {
                return Err(ClassifyError::BudgetExhausted { budget });
            }
            queue.push_back((next, next_seq));
        }
    }
    Ok(Classification { mutation_type: MutationType::MutationFiniteOther, witness: None, visited: seen.len() })
}

/// Catalog type of an acyclic exchange matrix, if any.
fn catalog_match(b: &[Vec<i64>]) -> Option<MutationType> {
    if !matrix_is_acyclic(b) {
        return None;
    }
    recognize(b).map(MutationType::from_diagram)
}

fn matrix_is_acyclic(b: &[Vec<i64>]) -> bool {
    let n = b.len();
    let mut indeg: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| b[i][j] > 0).count()).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for w in 0..n {
            if b[v][w] > 0 {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    removed == n
}

/// Why a subset was chosen as the non-Dynkin core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreKind {
    /// Two vertices joined by `m >= 3` arrows.
    Kronecker(usize),
    Affine(Diagram),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core {
    /// Sorted 0-based vertex subset.
    pub subset: Vec<usize>,
    pub kind: CoreKind,
}

impl fmt::Display for CoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreKind::Kronecker(m) => write!(f, "K_{m}"),
            CoreKind::Affine(d) => d.fmt(f),
        }
    }
}

/// Smallest (then lexicographically first) vertex subset whose full
/// subquiver is connected and either affine or a generalized Kronecker
/// quiver `K_m`, `m >= 3`. `None` exactly when the quiver is of Dynkin type.
pub fn find_non_dynkin_core(q: &Quiver) -> ClassifyResult<Option<Core>> {
    if classify(q)?.mutation_type.is_dynkin() {
        return Ok(None);
    }
    let n = q.n();
    for size in 2..=n {
        for subset in combinations(n, size) {
            let sub = q.full_subquiver(&subset)?;
            if !sub.is_connected() {
                continue;
            }
            if size == 2 {
                let m = q.entry(subset[0], subset[1]).unsigned_abs() as usize;
                if m >= 3 {
                    return Ok(Some(Core { subset, kind: CoreKind::Kronecker(m) }));
                }
            }
            if let MutationType::Affine(s, r) = classify(&sub)?.mutation_type {
                let d = Diagram::affine(s, r).expect("classified diagram is valid");
                return Ok(Some(Core { subset, kind: CoreKind::Affine(d) }));
            }
        }
    }
    // Every connected non-Dynkin quiver has such a subset.
    Err(ClassifyError::NoCore)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < size - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;

    fn triangle() -> Quiver {
        Quiver::from_arrows(3, vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 0)], None, true)
            .unwrap()
    }

    fn linear_a3() -> Quiver {
        Quiver::from_matrix(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap()
    }

    fn kronecker(m: i64) -> Quiver {
        Quiver::from_matrix(vec![vec![0, m], vec![-m, 0]]).unwrap()
    }

    #[test]
    fn bfs_examples() {
        let a2 = Quiver::from_matrix(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let r = mutation_class_bfs(&a2, DEFAULT_BUDGET, false).unwrap();
        assert_eq!((r.visited, r.abort_reason), (1, None));
        let r = mutation_class_bfs(&linear_a3(), DEFAULT_BUDGET, false).unwrap();
        assert_eq!((r.visited, r.abort_reason), (4, None));
        let r = mutation_class_bfs(&kronecker(3), DEFAULT_BUDGET, false).unwrap();
        assert_eq!(r.abort_reason, Some(AbortReason::EntryGe3));
        let r = mutation_class_bfs(&kronecker(2), DEFAULT_BUDGET, true).unwrap();
        assert_eq!(r.abort_reason, Some(AbortReason::EntryGe2));
    }

    #[test]
    fn bfs_budget() {
        // affine A_2^(1) has a finite class of more than one form
        let q = Quiver::from_matrix(vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]).unwrap();
        let r = mutation_class_bfs(&q, 1, false).unwrap();
        assert_eq!(r.abort_reason, Some(AbortReason::Budget));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&kronecker(2)).unwrap().mutation_type, MutationType::Affine(Series::A, 1));
        assert_eq!(classify(&kronecker(3)).unwrap().mutation_type, MutationType::MutationInfinite);
        let c = classify(&triangle()).unwrap();
        assert_eq!(c.mutation_type, MutationType::Dynkin(Series::A, 3));
        let (seq, rep) = c.witness.unwrap();
        let mut cur = triangle();
        for &k in &seq {
            cur = cur.mutate(k).unwrap();
        }
        assert_eq!(cur.exchange_matrix(), rep.exchange_matrix());
        assert!(rep.is_acyclic());
        assert_eq!(c.mutation_type.to_string(), "Dynkin A_3");
    }

    #[test]
    fn non_oriented_square_is_affine() {
        // 1 -> 2 -> 3 and 1 -> 4 -> 3
        let q = Quiver::from_arrows(
            4,
            vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 0, 3), Arrow::new("d", 3, 2)],
            None,
            true,
        )
        .unwrap();
        let c = classify(&q).unwrap();
        assert_eq!(c.mutation_type, MutationType::Affine(Series::A, 3));
        assert_eq!(c.witness.unwrap().0, Vec::<usize>::new());
    }

    #[test]
    fn oriented_four_cycle_is_dynkin_d4() {
        let q = Quiver::from_arrows(
            4,
            vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 3), Arrow::new("d", 3, 0)],
            None,
            true,
        )
        .unwrap();
        assert_eq!(classify(&q).unwrap().mutation_type, MutationType::Dynkin(Series::D, 4));
    }

    #[test]
    fn disconnected_and_two_cycles_are_rejected() {
        let q = Quiver::from_matrix(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(classify(&q).unwrap_err(), ClassifyError::Disconnected);
        let q = Quiver::from_arrows(2, vec![Arrow::new("x", 0, 1), Arrow::new("y", 1, 0)], None, false).unwrap();
        assert!(matches!(classify(&q), Err(ClassifyError::Quiver(QuiverError::TwoCycle(0, 1)))));
    }

    #[test]
    fn core_examples() {
        // 1 => 2 -> 3
        let q = Quiver::from_matrix(vec![vec![0, 2, 0], vec![-2, 0, 1], vec![0, -1, 0]]).unwrap();
        let core = find_non_dynkin_core(&q).unwrap().unwrap();
        assert_eq!(core.subset, vec![0, 1]);
        assert_eq!(core.kind, CoreKind::Affine(Diagram::affine(Series::A, 1).unwrap()));
        let core = find_non_dynkin_core(&kronecker(3)).unwrap().unwrap();
        assert_eq!((core.subset, core.kind), (vec![0, 1], CoreKind::Kronecker(3)));
        assert_eq!(find_non_dynkin_core(&linear_a3()).unwrap(), None);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
