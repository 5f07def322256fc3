//! Session history: undo and redo agree with replaying the history prefix.

use chrono::Utc;
use proptest::prelude::*;

use qpw_cli::session::{replay, Mode, Session, Step};
use qpw_core::json;

fn linear_a4() -> qpw_core::qp::QuiverWithPotential {
    let doc = serde_json::json!({
        "n": 4,
        "arrows": [
            {"id": "a", "src": 1, "tgt": 2},
            {"id": "b", "src": 2, "tgt": 3},
            {"id": "c", "src": 3, "tgt": 4}
        ]
    });
    json::qp_from_value(&doc).unwrap()
}

#[derive(Clone, Debug)]
enum Op {
    Mutate(usize),
    Undo,
    Redo,
}

fn arb_op() -> impl Strategy<Value = Op> {
    prop_oneof![3 => (1usize..=4).prop_map(Op::Mutate), 1 => Just(Op::Undo), 1 => Just(Op::Redo)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn current_is_the_replayed_prefix(ops in prop::collection::vec(arb_op(), 0..12)) {
        let initial = linear_a4();
        let mut s = Session::new("t".into(), initial.clone(), Utc::now());
        for op in ops {
            match op {
                Op::Mutate(k) => s.apply(Step { k, mode: Mode::Qp }, Utc::now()).unwrap(),
                Op::Undo => { s.undo(Utc::now()).unwrap(); }
                Op::Redo => { s.redo(Utc::now()).unwrap(); }
            }
            let expected = replay(&initial, &s.history()[..s.cursor()]).unwrap();
            prop_assert_eq!(s.current(), &expected);
        }
        let reloaded = Session::from_record(&s.to_record()).unwrap();
        prop_assert_eq!(reloaded.view(), s.view());
    }
}
