//! Splitting a QP into trivial and reduced parts, QP mutation, and random
//! probing for degeneracy.
//!
//! Reduction proceeds in two stages. First the quadratic part of the
//! potential is diagonalized, separately for each pair of vertices, by an
//! invertible linear change among parallel arrows; this exhibits trivial
//! pairs `(x_t, y_t)` with `W_2 = Σ x_t y_t`. Then, round by round, every
//! lowest-degree term that still mentions a trivial arrow is absorbed by a
//! substitution `x_t ↦ x_t − A_t`, `y_t ↦ y_t − B_t`; each round raises the
//! lowest degree of such terms, so at most `N` rounds are needed.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::Rational;
use crate::path::{PathCombination, Word};
use crate::qp::{QpError, QpResult, QuiverWithPotential};
use crate::quiver::Quiver;

/// The output of [`reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Trivial arrow pairs `(x, y)`, `x: i -> j`, `y: j -> i`, as indices
    /// into the input quiver.
    pub trivial_pairs: Vec<(usize, usize)>,
    /// The reduced QP: the input quiver without the trivial arrows (ids kept).
    pub reduced: QuiverWithPotential,
    /// The trivial QP `Σ x_t y_t` on the trivial arrows.
    pub trivial: QuiverWithPotential,
    /// Image of each input arrow under the composed right equivalence.
    pub right_equivalence: Vec<PathCombination>,
    /// `W_tri + W_red` written on the input quiver; equal to the input
    /// potential transformed by `right_equivalence`.
    pub split: QuiverWithPotential,
    /// Number of substitution rounds used after the linear stage.
    pub rounds: usize,
}

/// Split `p` into a trivial and a reduced QP by an explicit right equivalence.
pub fn reduce(p: &QuiverWithPotential) -> QpResult<Reduction> {
    let q = p.quiver();
    let narrows = q.arrows().len();
    let max_deg = p.truncation();
    let mut psi: Vec<PathCombination> = (0..narrows).map(|a| PathCombination::arrow(q, a)).collect();
    let mut pairs = Vec::new();

    // stage 1: diagonalize the quadratic part between each pair of vertices
    let mut linear = psi.clone();
    for i in 0..q.n() {
        for j in (i + 1)..q.n() {
            let xs = q.arrows_between(i, j);
            let ys = q.arrows_between(j, i);
            if xs.is_empty() || ys.is_empty() {
                continue;
            }
            let c: Vec<Vec<Rational>> = xs
                .iter()
                .map(|&x| {
                    ys.iter()
                        .map(|&y| {
                            let key = p.normalize_cycle(&[x, y]).expect("2-cycle is closed");
                            p.potential().terms().get(&key).cloned().unwrap_or_else(Rational::zero)
                        })
                        .collect()
                })
                .collect();
            let (l, r, rank) = diagonalize(c);
            if rank == 0 {
                continue;
            }
            for (s, &x) in xs.iter().enumerate() {
                let mut img = PathCombination::zero(i, j);
                for (t, &xt) in xs.iter().enumerate() {
                    img.add_term(vec![xt], l[t][s].clone());
                }
                linear[x] = img;
            }
            for (s, &y) in ys.iter().enumerate() {
                let mut img = PathCombination::zero(j, i);
                for (t, &yt) in ys.iter().enumerate() {
                    img.add_term(vec![yt], r[s][t].clone());
                }
                linear[y] = img;
            }
            pairs.extend((0..rank).map(|t| (xs[t], ys[t])));
        }
    }
    let mut current = p.substitute_unchecked(&linear);
    psi = compose(&psi, &linear, max_deg);

    // role of each arrow: Some((t, true)) for x_t, Some((t, false)) for y_t
    let mut role: Vec<Option<(usize, bool)>> = vec![None; narrows];
    for (t, &(x, y)) in pairs.iter().enumerate() {
        role[x] = Some((t, true));
        role[y] = Some((t, false));
    }

    // stage 2: push trivial arrows out of the higher-degree terms
    let mut rounds = 0;
    loop {
        let offending: Vec<(&Word, &Rational)> = current
            .potential()
            .terms()
            .iter()
            .filter(|(w, _)| w.len() > 2 && w.iter().any(|&a| role[a].is_some()))
            .collect();
        let Some(d) = offending.iter().map(|(w, _)| w.len()).min() else {
            break;
        };
        if rounds == max_deg {
            return Err(QpError::NonConvergence(max_deg));
        }
        rounds += 1;
        let mut phi: Vec<PathCombination> = (0..narrows).map(|a| PathCombination::arrow(q, a)).collect();
        for (w, c) in offending.into_iter().filter(|(w, _)| w.len() == d) {
            let pos = w
                .iter()
                .position(|&a| matches!(role[a], Some((_, false))))
                .or_else(|| w.iter().position(|&a| role[a].is_some()))
                .expect("offending term has a trivial arrow");
            let rotated: Word = w[pos..].iter().chain(&w[..pos]).copied().collect();
            let (t, is_x) = role[rotated[0]].expect("trivial");
            let rest: Word = rotated[1..].to_vec();
            // y_t · rest is absorbed by x_t ↦ x_t − rest, x_t · rest by y_t ↦ y_t − rest
            let target = if is_x { pairs[t].1 } else { pairs[t].0 };
            phi[target].add_term(rest, -c.clone());
        }
        current = current.substitute_unchecked(&phi);
        psi = compose(&psi, &phi, max_deg);
    }

    for (t, &(x, y)) in pairs.iter().enumerate() {
        let key = current.normalize_cycle(&[x, y]).expect("closed");
        debug_assert_eq!(current.potential().terms().get(&key), Some(&Rational::one()), "pair {t}");
    }

    let keep: Vec<usize> = (0..narrows).filter(|&a| role[a].is_none()).collect();
    let reduced = sub_qp(&current, &keep, |w| w.iter().all(|&a| role[a].is_none()))?;
    let trivial_arrows: Vec<usize> = (0..narrows).filter(|&a| role[a].is_some()).collect();
    let trivial = sub_qp(&current, &trivial_arrows, |w| w.len() == 2 && w.iter().all(|&a| role[a].is_some()))?;
    Ok(Reduction { trivial_pairs: pairs, reduced, trivial, right_equivalence: psi, split: current, rounds })
}

/// The QP on the arrows `keep` (in order) carrying the terms selected by `pick`.
fn sub_qp(p: &QuiverWithPotential, keep: &[usize], pick: impl Fn(&Word) -> bool) -> QpResult<QuiverWithPotential> {
    let q = p.quiver();
    let mut index = vec![usize::MAX; q.arrows().len()];
    for (new, &old) in keep.iter().enumerate() {
        index[old] = new;
    }
    let arrows = keep.iter().map(|&a| q.arrow(a).clone()).collect();
    let sub = Quiver::from_arrows(q.n(), arrows, Some(q.labels().to_vec()), false)?;
    let mut out = QuiverWithPotential::new(sub, p.truncation())?;
    for (w, c) in p.potential().terms() {
        if pick(w) {
            let mapped: Word = w.iter().map(|&a| index[a]).collect();
            out.add_term(&mapped, c.clone())?;
        }
    }
    Ok(out)
}

/// `a ↦ psi(a)` followed by `b ↦ phi(b)`.
fn compose(psi: &[PathCombination], phi: &[PathCombination], max_deg: usize) -> Vec<PathCombination> {
    psi.iter().map(|img| img.substitute(phi, max_deg)).collect()
}

/// Invertible `L`, `R` with `L C R` diagonal with `rank` leading ones.
fn diagonalize(mut c: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>, usize) {
    let rows = c.len();
    let cols = c.first().map_or(0, Vec::len);
    let ident = |n: usize| -> Vec<Vec<Rational>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
    };
    let (mut l, mut r) = (ident(rows), ident(cols));
    let mut rank = 0;
    while rank < rows.min(cols) {
        let Some((pi, pj)) =
            (rank..rows).flat_map(|i| (rank..cols).map(move |j| (i, j))).find(|&(i, j)| !c[i][j].is_zero())
        else {
            break;
        };
        c.swap(rank, pi);
        l.swap(rank, pi);
        for row in c.iter_mut() {
            row.swap(rank, pj);
        }
        for row in r.iter_mut() {
            row.swap(rank, pj);
        }
        let inv = c[rank][rank].recip();
        for v in c[rank].iter_mut() {
            *v *= &inv;
        }
        for v in l[rank].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != rank && !c[i][rank].is_zero() {
                let f = c[i][rank].clone();
                for j in 0..cols {
                    let delta = &f * &c[rank][j];
                    c[i][j] -= delta;
                }
                for j in 0..rows {
                    let delta = &f * &l[rank][j];
                    l[i][j] -= delta;
                }
            }
        }
        for j in 0..cols {
            if j != rank && !c[rank][j].is_zero() {
                let f = c[rank][j].clone();
                for row in c.iter_mut() {
                    let delta = &f * &row[rank];
                    row[j] -= delta;
                }
                for row in r.iter_mut() {
                    let delta = &f * &row[rank];
                    row[j] -= delta;
                }
            }
        }
        rank += 1;
    }
    (l, r, rank)
}

/// QP mutation: the reduced part of the premutation at `k`.
pub fn qp_mutate(p: &QuiverWithPotential, k: usize) -> QpResult<QuiverWithPotential> {
    Ok(reduce(&p.premutate(k)?)?.reduced)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub passed: bool,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    /// 0-based mutation sequence whose last step produced a 2-cycle.
    pub failing_sequence: Option<Vec<usize>>,
    pub mutations: usize,
}

/// Apply `trials` random mutation sequences of length `depth` and report the
/// first one that creates a 2-cycle. Passing is evidence of non-degeneracy,
/// not a proof.
pub fn nondegeneracy_probe(p: &QuiverWithPotential, depth: usize, trials: usize, seed: u64) -> QpResult<ProbeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.quiver().n();
    let mut report = ProbeReport { passed: true, depth, trials, seed, failing_sequence: None, mutations: 0 };
    if p.quiver().has_two_cycles() {
        report.passed = false;
        report.failing_sequence = Some(Vec::new());
        return Ok(report);
    }
    if n == 0 {
        return Ok(report);
    }
    for _ in 0..trials {
        let mut cur = p.clone();
        let mut seq: Vec<usize> = Vec::with_capacity(depth);
        for _ in 0..depth {
            let k = loop {
                let k = rng.random_range(0..n);
                if n == 1 || seq.last() != Some(&k) {
                    break k;
                }
            };
            seq.push(k);
            cur = qp_mutate(&cur, k)?;
            report.mutations += 1;
            if cur.quiver().has_two_cycles() {
                report.passed = false;
                report.failing_sequence = Some(seq);
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::field::rat;
    use crate::qp::DEFAULT_TRUNCATION;
    use crate::quiver::Arrow;

    fn triangle_qp(with_potential: bool) -> QuiverWithPotential {
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

    fn check_split(p: &QuiverWithPotential, red: &Reduction) {
        let images: BTreeMap<usize, PathCombination> = red.right_equivalence.iter().cloned().enumerate().collect();
        let transformed = p.apply_right_equivalence(&images).unwrap();
        assert_eq!(transformed.potential().terms(), red.split.potential().terms());
        assert!(red.reduced.is_reduced());
    }

    #[test]
    fn premutated_triangle_reduces_to_linear_quiver() {
        let pre = triangle_qp(true).premutate(2).unwrap();
        let red = reduce(&pre).unwrap();
        let ids: Vec<(String, String)> = red
            .trivial_pairs
            .iter()
            .map(|&(x, y)| (pre.quiver().arrow(x).id.clone(), pre.quiver().arrow(y).id.clone()))
            .collect();
        assert_eq!(ids, vec![("a".to_string(), "[bc]".to_string())]);
        let arrows: Vec<(&str, usize, usize)> =
            red.reduced.quiver().arrows().iter().map(|a| (a.id.as_str(), a.src, a.tgt)).collect();
        assert_eq!(arrows, vec![("b*", 2, 1), ("c*", 0, 2)]);
        assert!(red.reduced.potential().is_zero());
        // the absorbing substitution is a ↦ a − c*b*
        assert_eq!(red.right_equivalence[0].display(pre.quiver()), "a - c*b*");
        check_split(&pre, &red);
    }

    #[test]
    fn trivial_and_reduced_inputs() {
        let q = Quiver::from_arrows(2, vec![Arrow::new("x", 0, 1), Arrow::new("y", 1, 0)], None, false).unwrap();
        let p = QuiverWithPotential::from_id_terms(q, &[(vec!["x", "y"], rat(3))], 12).unwrap();
        let red = reduce(&p).unwrap();
        assert_eq!(red.trivial_pairs, vec![(0, 1)]);
        assert!(red.reduced.quiver().arrows().is_empty());
        assert!(red.reduced.potential().is_zero());
        assert_eq!(red.trivial.display_potential(), "xy");
        check_split(&p, &red);

        let p = triangle_qp(true);
        let red = reduce(&p).unwrap();
        assert!(red.trivial_pairs.is_empty());
        assert_eq!(red.reduced, p);
    }

    #[test]
    fn parallel_two_cycles_are_diagonalized() {
        // x1, x2: 0 -> 1, y1, y2: 1 -> 0, W = x1y1 + x1y2 + x2y1 + x2y2 + x1 y1 x2 y2
        let q = Quiver::from_arrows(
            2,
            vec![Arrow::new("x1", 0, 1), Arrow::new("x2", 0, 1), Arrow::new("y1", 1, 0), Arrow::new("y2", 1, 0)],
            None,
            false,
        )
        .unwrap();
        let p = QuiverWithPotential::from_id_terms(
            q,
            &[
                (vec!["x1", "y1"], rat(1)),
                (vec!["x1", "y2"], rat(1)),
                (vec!["x2", "y1"], rat(1)),
                (vec!["x2", "y2"], rat(1)),
                (vec!["x1", "y1", "x2", "y2"], rat(1)),
            ],
            8,
        )
        .unwrap();
        let red = reduce(&p).unwrap();
        // the quadratic form has rank 1
        assert_eq!(red.trivial_pairs.len(), 1);
        assert_eq!(red.reduced.quiver().arrows().len(), 2);
        assert!(red.reduced.is_reduced());
        check_split(&p, &red);
    }

    #[test]
    fn qp_mutation_examples() {
        let mutated = qp_mutate(&triangle_qp(true), 2).unwrap();
        let expected = triangle_qp(true).quiver().mutate(2).unwrap();
        assert_eq!(mutated.quiver().exchange_matrix(), expected.exchange_matrix());
        assert!(mutated.potential().is_zero());
        assert!(!mutated.quiver().has_two_cycles());

        let degenerate = qp_mutate(&triangle_qp(false), 2).unwrap();
        assert!(degenerate.quiver().has_two_cycles());

        let k2 = QuiverWithPotential::new(Quiver::from_matrix(vec![vec![0, 2], vec![-2, 0]]).unwrap(), 12).unwrap();
        let m = qp_mutate(&k2, 0).unwrap();
        assert_eq!(m.quiver().exchange_matrix(), &[vec![0, -2], vec![2, 0]]);
    }

    #[test]
    fn probe_examples() {
        let k2 = QuiverWithPotential::new(Quiver::from_matrix(vec![vec![0, 2], vec![-2, 0]]).unwrap(), 12).unwrap();
        assert!(nondegeneracy_probe(&k2, 6, 8, 1).unwrap().passed);
        assert!(nondegeneracy_probe(&triangle_qp(true), 6, 8, 1).unwrap().passed);
        let r = nondegeneracy_probe(&triangle_qp(false), 1, 4, 1).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failing_sequence.unwrap().len(), 1);
        // deterministic in the seed
        assert_eq!(
            nondegeneracy_probe(&triangle_qp(false), 1, 4, 9).unwrap(),
            nondegeneracy_probe(&triangle_qp(false), 1, 4, 9).unwrap()
        );
    }
}
