use serde::{Deserialize, Serialize};

use crate::expr::{Expr, Program};
use crate::quad::{compensated_sum, try_harmonic_mean1d, try_harmonic_mean2d, try_integrate2d_unit, Rect, Tolerance};
use crate::Result;

/// Absolute slack added to the quadrature errors when judging the residual.
pub const RESIDUAL_SLACK: f64 = 1e-7;

/// How `d^2 f / dx dy` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MixedPartial {
    #[default]
    Symbolic,
    /// Four-point central difference with step `1e-5 * max(1, |coordinate|)`.
    FiniteDifference,
}

const FD_STEP: f64 = 1e-5;

pub(crate) enum PartialEvaluator {
    Symbolic(Program),
    FiniteDifference(Program),
}

impl PartialEvaluator {
    pub(crate) fn new(f: &Expr, how: MixedPartial) -> Self {
        match how {
            MixedPartial::Symbolic => PartialEvaluator::Symbolic(f.mixed_partial().compile()),
            MixedPartial::FiniteDifference => PartialEvaluator::FiniteDifference(f.compile()),
        }
    }

    pub(crate) fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            PartialEvaluator::Symbolic(p) => Ok(p.eval(x, y)?),
            PartialEvaluator::FiniteDifference(p) => {
                let hx = FD_STEP * x.abs().max(1.0);
                let hy = FD_STEP * y.abs().max(1.0);
                let pp = p.eval(x + hx, y + hy)?;
                let pm = p.eval(x + hx, y - hy)?;
                let mp = p.eval(x - hx, y + hy)?;
                let mm = p.eval(x - hx, y - hy)?;
                Ok(((pp - pm) - (mp - mm)) / (4.0 * hx * hy))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Corner average plus harmonic double mean minus half the edge means.
    pub lhs: f64,
    /// Weighted double integral of the mixed partial.
    pub rhs: f64,
    pub residual: f64,
    /// Sum of the quadrature error estimates of both sides.
    pub combined_error: f64,
    pub residual_ok: bool,
}

/// Left side of the identity with its error estimate.
pub(crate) fn identity_lhs(f: &Program, r: &Rect, tol: &Tolerance) -> Result<(f64, f64)> {
    r.validate()?;
    let along_x = |y: f64| try_harmonic_mean1d(|x| Ok(f.eval(x, y)?), r.a, r.b, tol);
    let along_y = |x: f64| try_harmonic_mean1d(|y| Ok(f.eval(x, y)?), r.c, r.d, tol);
    let edges = [along_x(r.c)?, along_x(r.d)?, along_y(r.a)?, along_y(r.b)?];
    let double = try_harmonic_mean2d(|x, y| Ok(f.eval(x, y)?), r, tol)?;
    let corners = r
        .corners()
        .iter()
        .map(|&(x, y)| f.eval(x, y))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let corner_avg = compensated_sum(corners) / 4.0;
    let half_edges = 0.5 * compensated_sum(edges.iter().map(|e| e.value));
    let value = compensated_sum([corner_avg, double.value, -half_edges]);
    let err = double.err_estimate + 0.5 * edges.iter().map(|e| e.err_estimate).sum::<f64>();
    Ok((value, err))
}

fn identity_rhs(fxy: &PartialEvaluator, r: &Rect, tol: &Tolerance) -> Result<(f64, f64)> {
    let (a, b, c, d) = (r.a, r.b, r.c, r.d);
    let prefactor = a * b * c * d * (b - a) * (d - c) / 4.0;
    let res = try_integrate2d_unit(
        |t, s| {
            let at = t * b + (1.0 - t) * a;
            let bs = s * d + (1.0 - s) * c;
            let w = (1.0 - 2.0 * t) * (1.0 - 2.0 * s) / (at * bs).powi(2);
            Ok(w * fxy.eval(a * b / at, c * d / bs)?)
        },
        tol,
    )?;
    Ok((prefactor * res.value, prefactor * res.err_estimate))
}

/// Evaluates both sides of the integration-by-parts identity with the
/// symbolic mixed partial.
pub fn identity_lemma(f: &Expr, r: &Rect, tol: &Tolerance) -> Result<IdentityReport> {
    identity_lemma_with(f, r, tol, MixedPartial::Symbolic)
}

pub fn identity_lemma_with(
    f: &Expr,
    r: &Rect,
    tol: &Tolerance,
    how: MixedPartial,
) -> Result<IdentityReport> {
    let (lhs, lhs_err) = identity_lhs(&f.compile(), r, tol)?;
    let (rhs, rhs_err) = identity_rhs(&PartialEvaluator::new(f, how), r, tol)?;
    let residual = lhs - rhs;
    let combined_error = lhs_err + rhs_err;
    Ok(IdentityReport {
        lhs,
        rhs,
        residual,
        combined_error,
        residual_ok: residual.abs() <= combined_error + RESIDUAL_SLACK,
    })
}
