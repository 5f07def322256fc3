//! Property tests across the public API.

use proptest::prelude::*;
use qpw_core::canon::canonical_form;
use qpw_core::catalog::{catalog, DiagramKind};
use qpw_core::classify::classify;
use qpw_core::field::{rat, FieldKind};
use qpw_core::jacobian::{truncated_quotient, TruncatedAlgebra};
use qpw_core::json;
use qpw_core::qp::{QuiverWithPotential, DEFAULT_TRUNCATION};
use qpw_core::reduce::qp_mutate;
use qpw_core::rep::Representation;
use qpw_core::stability::pairing;
use qpw_core::witness::{null_root, run_witness, synthesize_theta, WitnessOptions};
use qpw_core::{Arrow, Quiver};

fn skew(n: usize, upper: &[i64]) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0; n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let x = *it.next().unwrap();
            b[i][j] = x;
            b[j][i] = -x;
        }
    }
    b
}

fn arb_quiver(max_n: usize, max_entry: i64) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-max_entry..=max_entry, n * (n - 1) / 2)
            .prop_map(move |u| Quiver::from_matrix(skew(n, &u)).unwrap())
    })
}

/// Two vertices with doubled arrows on a triangle: plenty of 3- and 6-cycles.
fn base_quiver() -> Quiver {
    let arrows = vec![
        Arrow::new("a1", 0, 1),
        Arrow::new("a2", 0, 1),
        Arrow::new("b", 1, 2),
        Arrow::new("c1", 2, 0),
        Arrow::new("c2", 2, 0),
        Arrow::new("d", 2, 3),
        Arrow::new("e", 3, 1),
    ];
    Quiver::from_arrows(4, arrows, None, true).unwrap()
}

const CYCLES: &[&[&str]] = &[
    &["a1", "b", "c1"],
    &["a1", "b", "c2"],
    &["a2", "b", "c1"],
    &["a2", "b", "c2"],
    &["b", "d", "e"],
    &["a1", "b", "c1", "a2", "b", "c2"],
    &["a1", "b", "d", "e", "b", "c1"],
];

fn arb_potential() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..CYCLES.len(), -3i64..=3), 0..6)
}

fn build(terms: &[(usize, i64)], rotate: usize) -> QuiverWithPotential {
    let terms: Vec<(Vec<&str>, _)> = terms
        .iter()
        .map(|&(c, x)| {
            let mut w = CYCLES[c].to_vec();
            let r = rotate % w.len();
            w.rotate_left(r);
            (w, rat(x))
        })
        .collect();
    QuiverWithPotential::from_id_terms(base_quiver(), &terms, DEFAULT_TRUNCATION).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_is_an_involution(q in arb_quiver(8, 3), k in 0usize..8) {
        let k = k % q.n();
        let back = q.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(back.exchange_matrix(), q.exchange_matrix());
    }

    #[test]
    fn mutation_type_is_a_mutation_invariant(q in arb_quiver(4, 2), k in 0usize..4) {
        prop_assume!(q.is_connected());
        let k = k % q.n();
        let a = classify(&q).unwrap().mutation_type;
        let b = classify(&q.mutate(k).unwrap()).unwrap().mutation_type;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn canonical_form_survives_mutating_twice(q in arb_quiver(6, 2), k in 0usize..6) {
        let k = k % q.n();
        let back = q.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(canonical_form(&back).unwrap(), canonical_form(&q).unwrap());
    }

    #[test]
    fn cyclic_derivative_is_linear(w1 in arb_potential(), w2 in arb_potential()) {
        let (p1, p2) = (build(&w1, 0), build(&w2, 0));
        let mut both = w1.clone();
        both.extend(&w2);
        let sum = build(&both, 0);
        for a in 0..base_quiver().arrows().len() {
            let mut expected = p1.cyclic_derivative(a);
            expected.add_scaled(&p2.cyclic_derivative(a), &rat(1));
            let got = sum.cyclic_derivative(a);
            prop_assert_eq!(got.terms(), expected.terms());
        }
    }

    #[test]
    fn potentials_ignore_rotation(w in arb_potential(), r in 0usize..6) {
        prop_assert_eq!(build(&w, r), build(&w, 0));
    }

    #[test]
    fn restriction_composes(w in arb_potential(), mask in 1u32..16, inner in 1u32..16) {
        let p = build(&w, 0);
        let outer: Vec<usize> = (0..4).filter(|v| mask >> v & 1 == 1).collect();
        let picked: Vec<usize> = (0..outer.len()).filter(|x| inner >> x & 1 == 1).collect();
        prop_assume!(!picked.is_empty());
        let nested = p.restrict(&outer).unwrap().restrict(&picked).unwrap();
        let direct = p.restrict(&picked.iter().map(|&x| outer[x]).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(nested.quiver().exchange_matrix(), direct.quiver().exchange_matrix());
        prop_assert_eq!(nested.id_terms(), direct.id_terms());
    }

    #[test]
    fn acyclic_jacobian_counts_paths(n in 2usize..5, upper in prop::collection::vec(0i64..=2, 6)) {
        // arrows only go from lower to higher vertices
        let mut arrows = Vec::new();
        let mut it = upper.iter();
        for s in 0..n {
            for t in (s + 1)..n {
                for _ in 0..*it.next().unwrap_or(&0) {
                    arrows.push(Arrow::new(format!("x{}", arrows.len()), s, t));
                }
            }
        }
        let q = Quiver::from_arrows(n, arrows, None, true).unwrap();
        // paths ending at each vertex, by dynamic programming
        let mut ending = vec![1usize; n];
        for t in 0..n {
            for a in q.arrows().iter().filter(|a| a.tgt == t) {
                ending[t] += ending[a.src];
            }
        }
        let alg = truncated_quotient(&QuiverWithPotential::new(q, DEFAULT_TRUNCATION).unwrap(), 8).unwrap();
        prop_assert_eq!(alg.certificate().total_dim(), Some(ending.iter().sum()));
    }

    #[test]
    fn synthesized_theta_meets_its_constraints(
        d in prop::collection::vec(0usize..3, 2..4),
        forbidden in prop::collection::vec(prop::collection::vec(0usize..3, 3), 0..4),
    ) {
        let n = d.len();
        let forbidden: Vec<Vec<usize>> = forbidden.into_iter().map(|mut e| { e.truncate(n); e }).collect();
        if let Some(theta) = synthesize_theta(&d, &forbidden, 2 * n as i64) {
            prop_assert_eq!(pairing(&theta, &d).unwrap(), 0);
            for e in &forbidden {
                prop_assert!(pairing(&theta, e).unwrap() <= -1);
            }
        }
    }
}

#[test]
fn null_roots_span_the_kernel() {
    for d in catalog(9).into_iter().filter(|d| d.kind == DiagramKind::Affine) {
        let delta = null_root(&d).unwrap();
        let mut c: Vec<i64> = delta.iter().map(|&x| 2 * x as i64).collect();
        for (u, v) in d.edges() {
            c[u] -= delta[v] as i64;
            c[v] -= delta[u] as i64;
        }
        assert!(c.iter().all(|&x| x == 0), "{d}");
        assert!(delta.contains(&1), "{d}: not primitive");
    }
}

/// Rigid QPs reached from acyclic quivers: QP mutation follows quiver
/// mutation and mutating twice returns the same Jacobian dimensions.
#[test]
fn qp_mutation_tracks_quiver_mutation() {
    let acyclic = [
        vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 2, 3)],
        vec![Arrow::new("a", 0, 1), Arrow::new("b", 2, 1), Arrow::new("c", 1, 3)],
        vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2), Arrow::new("c", 0, 3), Arrow::new("d", 3, 2)],
    ];
    for arrows in acyclic {
        let mut p =
            QuiverWithPotential::new(Quiver::from_arrows(4, arrows, None, true).unwrap(), DEFAULT_TRUNCATION).unwrap();
        for k in [1usize, 2, 0, 3, 1] {
            let next = qp_mutate(&p, k).unwrap();
            assert_eq!(next.quiver().exchange_matrix(), p.quiver().mutate(k).unwrap().exchange_matrix());
            let back = qp_mutate(&next, k).unwrap();
            assert_eq!(canonical_form(back.quiver()).unwrap(), canonical_form(p.quiver()).unwrap());
            let dims = |x: &QuiverWithPotential| TruncatedAlgebra::new(x, 10).unwrap().graded_dims().to_vec();
            assert_eq!(dims(&back), dims(&p));
            p = next;
        }
    }
}

#[test]
fn certificates_are_deterministic_and_round_trip() {
    let arrows = vec![Arrow::new("a", 0, 1), Arrow::new("b", 0, 1), Arrow::new("c", 1, 2)];
    let p = QuiverWithPotential::new(Quiver::from_arrows(3, arrows, None, true).unwrap(), DEFAULT_TRUNCATION).unwrap();
    let one = run_witness(&p, &WitnessOptions::default()).unwrap();
    let two = run_witness(&p, &WitnessOptions::default()).unwrap();
    assert_eq!(json::canonical_string(&one), json::canonical_string(&two));
    let reread = json::parse_value(&json::canonical_string(&one)).unwrap();
    assert_eq!(reread, one);
    let q = json::qp_from_value(&one["input"]).unwrap();
    assert_eq!(q, p);
    let m = Representation::thin(p.quiver(), FieldKind::Prime(3), vec![1, 1, 1], &[rat(1), rat(2), rat(0)]).unwrap();
    assert_eq!(json::rep_from_value(&json::rep_to_value(&m, p.quiver()), p.quiver()).unwrap(), m);
}
