//! Property tests of the expression layer.

use limcyc::expr::{parse, Var};
use proptest::prelude::*;

/// Expression texts drawn from the printable polynomial grammar.
fn poly_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        (-30i32..=30).prop_map(|n| format!("{:.1}", n as f64 / 10.0)),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}+{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}-{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}*{b})")),
            inner.clone().prop_map(|a| format!("(-{a})")),
            (inner, 0u32..=3).prop_map(|(a, n)| format!("({a})^{n}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    /// Printing and re-parsing preserves the evaluated function.
    #[test]
    fn print_parse_round_trip(text in poly_text(), pts in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 10)) {
        let e = parse(&text).unwrap();
        let round = parse(&e.to_string()).unwrap();
        for (x, y) in pts {
            let a = e.eval(x, y);
            let b = round.eval(x, y);
            prop_assert!(
                (a - b).abs() <= 1e-12 * (1.0 + a.abs()),
                "{text} printed as {e}: {a} vs {b} at ({x}, {y})"
            );
        }
    }

    /// The symbolic derivative agrees with central differences.
    #[test]
    fn derivative_matches_central_difference(text in poly_text(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let e = parse(&text).unwrap();
        // keep the comparison inside a well-conditioned range
        prop_assume!(e.eval(x, y).abs() < 1e4);
        let h = 1e-5;
        for var in [Var::X, Var::Y] {
            let d = e.differentiate(var);
            let exact = d.eval(x, y);
            prop_assume!(exact.abs() < 1e6);
            let approx = match var {
                Var::X => (e.eval(x + h, y) - e.eval(x - h, y)) / (2.0 * h),
                Var::Y => (e.eval(x, y + h) - e.eval(x, y - h)) / (2.0 * h),
            };
            prop_assert!(
                (exact - approx).abs() < 1e-5 * (1.0 + exact.abs()),
                "{text}: d/d{var:?} at ({x}, {y}) = {exact} vs {approx}"
            );
        }
    }

    /// Evaluation is deterministic: two walks of the same tree agree bitwise.
    #[test]
    fn evaluation_deterministic(text in poly_text(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let e = parse(&text).unwrap();
        let a = e.eval(x, y);
        let b = e.clone().eval(x, y);
        prop_assert!(a.to_bits() == b.to_bits());
    }
}
