mod common;

use common::checks::{parser_round_trip, PARSER_CORPUS};
use delta_nash::expr::{BinOp, Func, ValueExpr, Var};
use proptest::prelude::*;

#[test]
fn corpus_round_trips() {
    for text in PARSER_CORPUS {
        parser_round_trip(text).unwrap();
    }
}

#[test]
fn corpus_values_survive_printing() {
    for text in PARSER_CORPUS {
        let tree = ValueExpr::parse(text).unwrap();
        let again = ValueExpr::parse(&tree.to_string()).unwrap();
        for (s1, s2) in [(0.5, 3.0), (30.0, 70.0), (-2.0, 9.0)] {
            let (a, b) = (tree.eval(s1, s2), again.eval(s1, s2));
            assert_eq!(a.is_ok(), b.is_ok());
            if let (Ok(a), Ok(b)) = (a, b) {
                assert!(a == b || (a.is_nan() && b.is_nan()), "{text} at ({s1}, {s2})");
            }
        }
    }
}

fn leaf() -> impl Strategy<Value = ValueExpr> {
    prop_oneof![
        Just(ValueExpr::Var(Var::S1)),
        Just(ValueExpr::Var(Var::S2)),
        (0.0..1e6f64).prop_map(ValueExpr::Const),
        (0u32..100).prop_map(|n| ValueExpr::Const(n as f64)),
    ]
}

fn tree() -> impl Strategy<Value = ValueExpr> {
    leaf().prop_recursive(5, 48, 3, |inner| {
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        prop_oneof![
            inner.clone().prop_map(|e| ValueExpr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| ValueExpr::Binary(o, Box::new(a), Box::new(b))),
            (inner.clone(), -3i32..=4).prop_map(|(e, n)| ValueExpr::Pow(Box::new(e), n)),
            (prop_oneof![Just(Func::Min), Just(Func::Max)], inner.clone(), inner.clone())
                .prop_map(|(f, a, b)| ValueExpr::Call(f, vec![a, b])),
            inner.prop_map(|e| ValueExpr::Call(Func::Abs, vec![e])),
        ]
    })
}

proptest! {
    #[test]
    fn generated_trees_round_trip(t in tree()) {
        let printed = t.to_string();
        let parsed = ValueExpr::parse(&printed);
        prop_assert!(parsed.is_ok(), "{}: {:?}", printed, parsed);
        prop_assert_eq!(parsed.unwrap(), t);
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    for text in ["", "s1 +", "s1^2^3", "s1^0.5", "s3 + 1", "min(s1)", "abs(s1, s2)", "(s1", "s1)", "1e999"] {
        assert!(ValueExpr::parse(text).is_err(), "{text:?} parsed");
    }
}
