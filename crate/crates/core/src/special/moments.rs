//! Weighted moments `iint w(t,s) (A_t B_s)^(-2q) dt ds` over the unit square,
//! where `A_t = tb + (1-t)a` and `B_s = sd + (1-s)c`.
//!
//! The four weights attach to the corners of the rectangle as
//! `ts -> (a,c)`, `t(1-s) -> (a,d)`, `(1-t)s -> (b,c)`, `(1-t)(1-s) -> (b,d)`.

use serde::{Deserialize, Serialize};

use super::gauss2f1;
use crate::quad::{try_integrate2d_unit, QuadResult, Rect, Tolerance};
use crate::{Error, Result};

/// Conjugate Hölder exponents; `p` is always derived from `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    q: f64,
    p: f64,
}

impl BoundParams {
    pub const MIN_Q_EXCESS: f64 = 1e-9;

    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 1.0 + Self::MIN_Q_EXCESS) {
            return Err(Error::InvalidParameter(format!(
                "q must be finite and > 1 + 1e-9, got {q}"
            )));
        }
        Ok(BoundParams { q, p: q / (q - 1.0) })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderMoments {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    /// Per-moment error estimates; zero for closed-form evaluations.
    pub errors: [f64; 4],
}

impl HolderMoments {
    fn exact(m: [f64; 4]) -> Self {
        HolderMoments {
            m1: m[0],
            m2: m[1],
            m3: m[2],
            m4: m[3],
            errors: [0.0; 4],
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.m1, self.m2, self.m3, self.m4]
    }

    pub fn sum(&self) -> f64 {
        crate::quad::compensated_sum(self.as_array())
    }

    /// Largest `|m_i - other_i| / |other_i|`.
    pub fn max_rel_difference(&self, other: &HolderMoments) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs() / b.abs())
            .fold(0.0, f64::max)
    }
}

fn check(r: &Rect, q: f64) -> Result<()> {
    r.validate()?;
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "moment exponent q must be >= 1, got {q}"
        )));
    }
    Ok(())
}

fn weight(i: usize, t: f64, s: f64) -> f64 {
    match i {
        0 => t * s,
        1 => t * (1.0 - s),
        2 => (1.0 - t) * s,
        _ => (1.0 - t) * (1.0 - s),
    }
}

fn kernel(r: &Rect, q: f64) -> impl Fn(f64, f64) -> f64 + '_ {
    move |t, s| {
        let at = t * r.b + (1.0 - t) * r.a;
        let bs = s * r.d + (1.0 - s) * r.c;
        (at * bs).powf(-2.0 * q)
    }
}

/// Moments by direct cubature of each weighted integrand.
///
/// `q = 1` is accepted for oracle testing even though the bound itself needs
/// `q > 1`.
pub fn holder_moments_direct(r: &Rect, q: f64, tol: &Tolerance) -> Result<HolderMoments> {
    check(r, q)?;
    let k = kernel(r, q);
    let mut m = [0.0; 4];
    let mut errors = [0.0; 4];
    for i in 0..4 {
        let res = try_integrate2d_unit(|t, s| Ok(weight(i, t, s) * k(t, s)), tol)?;
        if !res.converged {
            return Err(Error::NotConverged {
                what: format!("Hölder moment m{}", i + 1),
                best: res.value,
            });
        }
        m[i] = res.value;
        errors[i] = res.err_estimate;
    }
    Ok(HolderMoments {
        m1: m[0],
        m2: m[1],
        m3: m[2],
        m4: m[3],
        errors,
    })
}

/// `iint (A_t B_s)^(-2q) dt ds` by cubature; equals `m1 + m2 + m3 + m4`.
pub fn moment_total_direct(r: &Rect, q: f64, tol: &Tolerance) -> Result<QuadResult> {
    check(r, q)?;
    let k = kernel(r, q);
    try_integrate2d_unit(|t, s| Ok(k(t, s)), tol)
}

/// One-axis factors `(int t L_t^(-2q) dt, int (1-t) L_t^(-2q) dt)` for
/// `L_t = t*hi + (1-t)*lo`, via `2F1` with `z = 1 - lo/hi`.
pub fn axis_factors(lo: f64, hi: f64, q: f64) -> Result<(f64, f64)> {
    let z = 1.0 - lo / hi;
    let scale = hi.powf(-2.0 * q);
    let total = gauss2f1(2.0 * q, 1.0, 2.0, z)?;
    let tail = gauss2f1(2.0 * q, 2.0, 3.0, z)?;
    let weight_one_minus_t = 0.5 * scale * tail;
    let weight_t = scale * (total - 0.5 * tail);
    Ok((weight_t, weight_one_minus_t))
}

/// Moments as products of hypergeometric axis factors.
pub fn holder_moments_hypergeometric(r: &Rect, q: f64) -> Result<HolderMoments> {
    check(r, q)?;
    let (xt, x1t) = axis_factors(r.a, r.b, q)?;
    let (ys, y1s) = axis_factors(r.c, r.d, q)?;
    Ok(HolderMoments::exact([xt * ys, xt * y1s, x1t * ys, x1t * y1s]))
}

/// The coefficients `C_1..C_4` exactly as printed in the bound's statement,
/// with the moments they imply, `C_i / (4 (bd)^(2q))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperCoefficients {
    pub c: [f64; 4],
    pub implied: HolderMoments,
}

pub fn paper_coefficients(r: &Rect, q: f64) -> Result<PaperCoefficients> {
    check(r, q)?;
    let za = 1.0 - r.a / r.b;
    let zc = 1.0 - r.c / r.d;
    let f1a = gauss2f1(2.0 * q, 1.0, 2.0, za)?;
    let f2a = gauss2f1(2.0 * q, 2.0, 3.0, za)?;
    let f1c = gauss2f1(2.0 * q, 1.0, 2.0, zc)?;
    let f2c = gauss2f1(2.0 * q, 2.0, 3.0, zc)?;
    let c = [f1a * f1c, f1a * f2c, f2a * f1c, f2a * f2c];
    let scale = 4.0 * (r.b * r.d).powf(2.0 * q);
    Ok(PaperCoefficients {
        c,
        implied: HolderMoments::exact(c.map(|ci| ci / scale)),
    })
}

/// Outcome of checking the printed coefficients against direct cubature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientComparison {
    pub paper: PaperCoefficients,
    pub direct: HolderMoments,
    pub max_rel_discrepancy: f64,
    /// True when every implied moment matches its direct value to `1e-6`.
    pub consistent: bool,
}

pub fn compare_paper_coefficients(
    r: &Rect,
    q: f64,
    tol: &Tolerance,
) -> Result<CoefficientComparison> {
    let paper = paper_coefficients(r, q)?;
    let direct = holder_moments_direct(r, q, tol)?;
    let max_rel_discrepancy = paper.implied.max_rel_difference(&direct);
    Ok(CoefficientComparison {
        paper,
        direct,
        max_rel_discrepancy,
        consistent: max_rel_discrepancy <= 1e-6,
    })
}
