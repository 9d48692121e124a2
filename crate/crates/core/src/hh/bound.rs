use serde::{Deserialize, Serialize};

use super::identity::{identity_lhs, MixedPartial, PartialEvaluator};
use crate::expr::{BinaryOp, Expr, UnaryOp};
use crate::quad::{compensated_sum, Rect, Tolerance};
use crate::special::{holder_moments_direct, paper_coefficients, BoundParams, HolderMoments};
use crate::Result;

/// Absolute slack in the dominance verdict.
pub const BOUND_SLACK: f64 = 1e-9;
/// Relative agreement required of the printed-coefficient form.
pub const PAPER_FORM_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: f64,
    pub p: f64,
    pub lhs_abs: f64,
    /// Bound with moments from direct cubature.
    pub rhs_direct: f64,
    /// Bound with the printed hypergeometric coefficients.
    pub rhs_paper: f64,
    /// `|f_xy|` at `(a,c), (a,d), (b,c), (b,d)`.
    pub corner_partials: [f64; 4],
    pub moments: HolderMoments,
    /// Error allowance used for `holds_direct`.
    pub tolerance: f64,
    pub holds_direct: bool,
    pub paper_form_consistent: bool,
}

/// `|f_xy|^q`, the function whose coordinate-wise harmonic convexity the
/// bound assumes.
pub fn derivative_magnitude(f: &Expr, q: f64) -> Expr {
    Expr::binary(
        BinaryOp::Pow,
        Expr::unary(UnaryOp::Abs, f.mixed_partial()),
        Expr::constant(q),
    )
}

pub fn bound_theorem(f: &Expr, r: &Rect, bp: BoundParams, tol: &Tolerance) -> Result<BoundReport> {
    bound_theorem_with(f, r, bp, tol, MixedPartial::Symbolic)
}

/// Compares the identity's left side against the Hölder bound built from the
/// corner values of `|f_xy|^q`.
pub fn bound_theorem_with(
    f: &Expr,
    r: &Rect,
    bp: BoundParams,
    tol: &Tolerance,
    how: MixedPartial,
) -> Result<BoundReport> {
    r.validate()?;
    let (q, p) = (bp.q(), bp.p());
    let (lhs, lhs_err) = identity_lhs(&f.compile(), r, tol)?;

    let fxy = PartialEvaluator::new(f, how);
    let mut corner_partials = [0.0; 4];
    for (slot, &(x, y)) in corner_partials.iter_mut().zip(r.corners().iter()) {
        *slot = fxy.eval(x, y)?.abs();
    }
    let powered = corner_partials.map(|g| g.powf(q));

    let (a, b, c, d) = (r.a, r.b, r.c, r.d);
    let holder = (p + 1.0).powf(-2.0 / p);

    let moments = holder_moments_direct(r, q, tol)?;
    let weighted = compensated_sum(moments.as_array().iter().zip(powered).map(|(m, g)| m * g));
    let prefactor = a * b * c * d * (b - a) * (d - c) / 4.0;
    let rhs_direct = prefactor * holder * weighted.powf(1.0 / q);
    // d(S^(1/q)) = S^(1/q - 1) dS / q
    let weighted_err: f64 = moments.errors.iter().zip(powered).map(|(e, g)| e * g).sum();
    let rhs_err = if weighted > 0.0 {
        rhs_direct * weighted_err / (q * weighted)
    } else {
        0.0
    };

    let printed = paper_coefficients(r, q)?;
    let printed_sum = compensated_sum(printed.c.iter().zip(powered).map(|(ci, g)| ci * g));
    let rhs_paper = a * c * (b - a) * (d - c) / (4.0 * b * d * (p + 1.0).powf(2.0 / p))
        * (printed_sum / 4.0).powf(1.0 / q);

    let lhs_abs = lhs.abs();
    let tolerance = lhs_err + rhs_err + BOUND_SLACK;
    Ok(BoundReport {
        q,
        p,
        lhs_abs,
        rhs_direct,
        rhs_paper,
        corner_partials,
        moments,
        tolerance,
        holds_direct: lhs_abs <= rhs_direct + tolerance,
        paper_form_consistent: (rhs_paper - rhs_direct).abs()
            <= PAPER_FORM_AGREEMENT * (1.0 + rhs_direct),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_on_unit_square() {
        let f: Expr = "x*y".parse().unwrap();
        let r = Rect::new(1.0, 2.0, 1.0, 2.0).unwrap();
        let rep = bound_theorem(&f, &r, BoundParams::new(2.0).unwrap(), &Tolerance::default()).unwrap();
        assert!((rep.lhs_abs - (1.5 - 2.0 * 2f64.ln()).powi(2)).abs() < 1e-10);
        assert!((rep.rhs_direct - 7.0 / 72.0).abs() < 1e-10);
        assert!(rep.holds_direct);
        assert!(!rep.paper_form_consistent);
        assert_eq!(rep.corner_partials, [1.0; 4]);
    }

    #[test]
    fn constants_give_zero_bound() {
        let f: Expr = "3".parse().unwrap();
        let r = Rect::new(1.0, 4.0, 2.0, 3.0).unwrap();
        let rep = bound_theorem(&f, &r, BoundParams::new(2.0).unwrap(), &Tolerance::default()).unwrap();
        assert!(rep.lhs_abs < 1e-12);
        assert_eq!(rep.rhs_direct, 0.0);
        assert!(rep.holds_direct);
    }

    #[test]
    fn magnitude_expression() {
        let f: Expr = "x^2*y^2".parse().unwrap();
        let g = derivative_magnitude(&f, 2.0);
        // f_xy = 4xy
        assert!((g.eval(1.0, 2.0).unwrap() - 64.0).abs() < 1e-12);
    }
}
