#![allow(dead_code)]

use hhcert::{Expr, Rect};
use proptest::prelude::*;

pub fn expr(s: &str) -> Expr {
    s.parse().unwrap()
}

/// Rectangles with corners in `[0.5, 6]`.
pub fn rect() -> impl Strategy<Value = Rect> {
    (0.5f64..2.0, 1.1f64..3.0, 0.5f64..2.0, 1.1f64..3.0)
        .prop_map(|(a, rx, c, ry)| Rect::new(a, a * rx, c, c * ry).unwrap())
}

/// Sums of one to three monomials `k x^i y^j`, `i, j` in `-2..=3`.
pub fn laurent_polynomial() -> impl Strategy<Value = Expr> {
    prop::collection::vec((-2.0f64..2.0, -2i32..=3, -2i32..=3), 1..=3).prop_map(|terms| {
        let text = terms
            .iter()
            .map(|(k, i, j)| format!("({k:.3})*x^{i}*y^{j}"))
            .collect::<Vec<_>>()
            .join("+");
        expr(&text)
    })
}

/// Same shape with nonnegative coefficients and exponents `1..=3`, so every
/// slice is nondecreasing and convex.
pub fn increasing_polynomial() -> impl Strategy<Value = Expr> {
    prop::collection::vec((0.0f64..2.0, 0i32..=3, 0i32..=3), 1..=3).prop_map(|terms| {
        let text = terms
            .iter()
            .map(|(k, i, j)| format!("{k:.3}*x^{i}*y^{j}"))
            .collect::<Vec<_>>()
            .join("+");
        expr(&text)
    })
}
