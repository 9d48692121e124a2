mod common;

use common::expr;
use hhcert::expr::{BinaryOp, UnaryOp};
use hhcert::{Expr, Var};
use proptest::prelude::*;

fn literal() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..20).prop_map(|n| Expr::constant(n as f64)),
        (0.0f64..1e6).prop_map(Expr::constant),
        Just(Expr::constant(1e-7)),
        Just(Expr::constant(2.5e300)),
    ]
}

/// Trees of the shapes the parser produces.
fn tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::x()), Just(Expr::y()), literal()];
    leaf.prop_recursive(5, 48, 2, |inner| {
        let unary = prop_oneof![
            Just(UnaryOp::Neg),
            Just(UnaryOp::Exp),
            Just(UnaryOp::Ln),
            Just(UnaryOp::Sqrt),
            Just(UnaryOp::Abs),
            Just(UnaryOp::Sin),
            Just(UnaryOp::Cos),
        ];
        let binary = prop_oneof![
            Just(BinaryOp::Add),
            Just(BinaryOp::Sub),
            Just(BinaryOp::Mul),
            Just(BinaryOp::Div),
        ];
        prop_oneof![
            (unary, inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
            (binary, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (inner.clone(), inner).prop_map(|(b, e)| Expr::pow(b, e)),
        ]
    })
}

/// Smooth trees whose leaves are `x`, `y` and constants in `[0.5, 2]`.
fn smooth_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::x()),
        Just(Expr::y()),
        (0.5f64..2.0).prop_map(Expr::constant)
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Add, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Sub, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Mul, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Div, l, r)),
            (inner.clone(), -2i32..=3).prop_map(|(b, k)| Expr::pow(b, Expr::constant(k as f64))),
            (inner.clone(), inner.clone()).prop_map(|(b, e)| Expr::pow(b, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Exp, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Ln, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Sqrt, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Sin, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Cos, e)),
            inner.prop_map(|e| Expr::unary(UnaryOp::Neg, e)),
        ]
    })
}

fn partial_by_differences(e: &Expr, var: Var, x: f64, y: f64) -> Option<f64> {
    let h = 1e-4;
    let at = |k: f64| match var {
        Var::X => e.eval(x + k * h, y),
        Var::Y => e.eval(x, y + k * h),
    };
    let (p2, p1, m1, m2) = (at(2.0).ok()?, at(1.0).ok()?, at(-1.0).ok()?, at(-2.0).ok()?);
    Some((-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h))
}

proptest! {
    #[test]
    fn display_round_trips(e in tree()) {
        let text = e.to_string();
        let parsed: Expr = text.parse().unwrap();
        prop_assert_eq!(&parsed, &e, "printed as {}", text);
        let again: Expr = parsed.to_string().parse().unwrap();
        prop_assert_eq!(again, parsed);
    }

    #[test]
    fn derivative_matches_differences(e in smooth_tree(), x in 1.0f64..3.0, y in 1.0f64..3.0) {
        let Ok(v) = e.eval(x, y) else { return Ok(()) };
        prop_assume!(v.abs() < 1e6);
        for var in [Var::X, Var::Y] {
            let Some(fd) = partial_by_differences(&e, var, x, y) else { continue };
            let Ok(exact) = e.differentiate(var).eval(x, y) else { continue };
            prop_assert!(
                (exact - fd).abs() <= 1e-6 * (1.0 + exact.abs()),
                "{e} d/d{var:?} at ({x}, {y}): {exact} vs {fd}"
            );
        }
    }

    #[test]
    fn mixed_partials_commute(e in smooth_tree()) {
        let xy = e.differentiate(Var::X).differentiate(Var::Y);
        let yx = e.differentiate(Var::Y).differentiate(Var::X);
        for i in 0..100 {
            let x = 1.0 + 2.0 * ((i * 37 % 100) as f64) / 100.0;
            let y = 1.0 + 2.0 * ((i * 61 % 100) as f64) / 100.0;
            // overflowing towers give 0 * inf on one side; nothing to compare
            if let (Ok(a), Ok(b)) = (xy.eval(x, y), yx.eval(x, y)) {
                if !(a.is_finite() && b.is_finite()) {
                    continue;
                }
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0), "{e} at ({x},{y})");
            }
        }
    }

    #[test]
    fn compiled_program_is_bit_identical(e in tree(), x in 0.1f64..5.0, y in 0.1f64..5.0) {
        let p = e.compile();
        match (e.eval(x, y), p.eval(x, y)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "tree {a:?} vs program {b:?}"),
        }
    }
}

#[test]
fn grammar_examples() {
    assert_eq!(expr("x*y").eval(2.0, 3.0).unwrap(), 6.0);
    assert_eq!(expr("2^3^2").eval(0.0, 0.0).unwrap(), 512.0);
    assert_eq!(expr("-x^2").eval(3.0, 0.0).unwrap(), -9.0);
    assert!("2x".parse::<Expr>().is_err());
    let err = "ln(x-1)".parse::<Expr>().unwrap().eval(0.5, 0.0).unwrap_err();
    assert_eq!(err.node, "ln(x-1.0)");
}
