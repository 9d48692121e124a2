//! Adaptive quadrature in one and two dimensions.
//!
//! Every integral is computed by global adaptive bisection with the 7/15-point
//! Gauss-Kronrod pair: the panel with the largest error estimate is split
//! (leftmost wins ties) until the summed error meets the tolerance, a panel
//! reaches `max_depth`, or the evaluation budget runs out. Panel values and
//! errors are reduced left to right with compensated summation, so results
//! are bit-reproducible.
//!
//! The harmonic means `ab/(b-a) * int_a^b g(x)/x^2 dx` are computed after the
//! substitution `u = 1/x`, which turns them into plain means of `g(1/u)` over
//! `[1/b, 1/a]`.

mod kronrod;
mod sum;

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::{Error, Result};

pub use sum::{compensated_sum, NeumaierSum};

/// The rectangle `[a, b] x [c, d]` with `0 < a < b` and `0 < c < d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Rect {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let r = Rect { a, b, c, d };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let Rect { a, b, c, d } = *self;
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(Error::InvalidRect(format!("{name} must be finite")));
            }
        }
        if a <= 0.0 {
            return Err(Error::InvalidRect("a must be > 0".into()));
        }
        if c <= 0.0 {
            return Err(Error::InvalidRect("c must be > 0".into()));
        }
        if a >= b {
            return Err(Error::InvalidRect("a must be < b".into()));
        }
        if c >= d {
            return Err(Error::InvalidRect("c must be < d".into()));
        }
        Ok(())
    }

    /// Harmonic midpoint `2ab/(a+b)` of `[a, b]`.
    pub fn harmonic_mid_x(&self) -> f64 {
        2.0 * self.a * self.b / (self.a + self.b)
    }

    pub fn harmonic_mid_y(&self) -> f64 {
        2.0 * self.c * self.d / (self.c + self.d)
    }

    pub fn mid_x(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn mid_y(&self) -> f64 {
        0.5 * (self.c + self.d)
    }

    /// Corners in the order `(a,c), (a,d), (b,c), (b,d)`.
    pub fn corners(&self) -> [(f64, f64); 4] {
        [
            (self.a, self.c),
            (self.a, self.d),
            (self.b, self.c),
            (self.b, self.d),
        ]
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.a..=self.b).contains(&x) && (self.c..=self.d).contains(&y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any panel.
    pub max_depth: u32,
    /// Integrand evaluations allowed for one one-dimensional integral.
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 50,
            max_evals: 150_000,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let t = Tolerance {
            abs_tol,
            rel_tol,
            ..Tolerance::default()
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::InvalidParameter(
                "tolerances must be non-negative".into(),
            ));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::InvalidParameter(
                "at least one of abs_tol, rel_tol must be positive".into(),
            ));
        }
        if self.max_evals < kronrod::POINTS {
            return Err(Error::InvalidParameter(format!(
                "max_evals must be at least {}",
                kronrod::POINTS
            )));
        }
        Ok(())
    }

    /// Error allowed for an integral whose value is `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn scaled(self, factor: f64) -> Self {
        QuadResult {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.abs(),
            ..self
        }
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    aux: f64,
    depth: u32,
}

// Max-heap on error; among equal errors the leftmost panel comes first.
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

/// Adaptive driver. `g` returns the integrand and an auxiliary channel whose
/// integral over the final panels is returned alongside the result.
fn adaptive<F>(mut g: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<(QuadResult, f64)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    tol.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "integration interval [{lo}, {hi}] must be finite with lo < hi"
        )));
    }

    let first = kronrod::gk15(&mut g, lo, hi)?;
    let mut evaluations = kronrod::POINTS;
    let mut value = first.value;
    let mut error = first.error;
    let mut active = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    active.push(Panel {
        lo,
        hi,
        value: first.value,
        error: first.error,
        aux: first.aux,
        depth: 0,
    });

    let mut converged = false;
    loop {
        if error <= tol.target(value) {
            converged = true;
            break;
        }
        if evaluations + 2 * kronrod::POINTS > tol.max_evals {
            break;
        }
        let Some(worst) = active.pop() else {
            break;
        };
        if worst.depth >= tol.max_depth {
            done.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // interval no longer representable
            done.push(worst);
            continue;
        }
        let left = kronrod::gk15(&mut g, worst.lo, mid)?;
        let right = kronrod::gk15(&mut g, mid, worst.hi)?;
        evaluations += 2 * kronrod::POINTS;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        for (a, b, est) in [(worst.lo, mid, left), (mid, worst.hi, right)] {
            active.push(Panel {
                lo: a,
                hi: b,
                value: est.value,
                error: est.error,
                aux: est.aux,
                depth: worst.depth + 1,
            });
        }
    }

    done.extend(active.into_vec());
    done.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let value = compensated_sum(done.iter().map(|p| p.value));
    let err_estimate = compensated_sum(done.iter().map(|p| p.error));
    let aux = compensated_sum(done.iter().map(|p| p.aux));
    let result = QuadResult {
        value,
        err_estimate,
        evaluations,
        converged: converged && err_estimate <= tol.target(value),
    };
    Ok((result, aux))
}

/// Integrates a fallible integrand over `[lo, hi]`.
///
/// Exhausting `max_depth` or the evaluation budget is not an error: the best
/// estimate is returned with `converged = false`.
pub fn try_integrate1d<F>(mut g: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok(adaptive(|x| Ok((g(x)?, 0.0)), lo, hi, tol)?.0)
}

/// Integrates `g` over `[lo, hi]`.
pub fn integrate1d<F>(g: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate1d(|x| Ok(g(x)), lo, hi, tol)
}

/// `(ab/(b-a)) * int_a^b g(x)/x^2 dx`, computed as the mean of `g(1/u)` over
/// `u in [1/b, 1/a]`.
pub fn try_harmonic_mean1d<F>(mut g: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_positive_interval(a, b)?;
    let (lo, hi) = (1.0 / b, 1.0 / a);
    let width = hi - lo;
    let inner = Tolerance {
        abs_tol: tol.abs_tol * width,
        ..*tol
    };
    let r = try_integrate1d(|u| g(1.0 / u), lo, hi, &inner)?;
    Ok(r.scaled(1.0 / width))
}

pub fn harmonic_mean1d<F>(g: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_harmonic_mean1d(|x| Ok(g(x)), a, b, tol)
}

/// Arithmetic mean `(1/(hi-lo)) * int_lo^hi g`.
pub fn try_mean1d<F>(g: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let width = hi - lo;
    let inner = Tolerance {
        abs_tol: tol.abs_tol * width.abs(),
        ..*tol
    };
    Ok(try_integrate1d(g, lo, hi, &inner)?.scaled(1.0 / width))
}

/// Total integrand evaluations allowed in a cubature, as a multiple of
/// `Tolerance::max_evals`.
pub const CUBATURE_BUDGET_FACTOR: usize = 40;

/// Iterated integral over `[x_lo, x_hi] x [y_lo, y_hi]`, outer in `x`.
///
/// The error estimate is the outer estimate plus the outer rule applied to
/// the inner estimates.
pub fn try_integrate2d<F>(
    mut h: F,
    (x_lo, x_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    tol.validate()?;
    let x_width = x_hi - x_lo;
    let half = Tolerance {
        abs_tol: 0.5 * tol.abs_tol,
        rel_tol: 0.5 * tol.rel_tol,
        ..*tol
    };
    let inner_tol = Tolerance {
        abs_tol: half.abs_tol / x_width.abs().max(f64::MIN_POSITIVE),
        ..half
    };
    let budget = tol.max_evals.saturating_mul(CUBATURE_BUDGET_FACTOR);
    let inner_evals = Cell::new(0_usize);
    let inner_converged = Cell::new(true);
    let (outer, inner_error) = adaptive(
        |x| {
            // once the total budget is spent every inner rule gets one panel
            let remaining = budget.saturating_sub(inner_evals.get());
            let limited = Tolerance {
                max_evals: remaining.clamp(kronrod::POINTS, tol.max_evals.max(kronrod::POINTS)),
                ..inner_tol
            };
            let r = try_integrate1d(|y| h(x, y), y_lo, y_hi, &limited)?;
            inner_evals.set(inner_evals.get() + r.evaluations);
            if !r.converged {
                inner_converged.set(false);
            }
            Ok((r.value, r.err_estimate))
        },
        x_lo,
        x_hi,
        &half,
    )?;
    let err_estimate = outer.err_estimate + inner_error;
    Ok(QuadResult {
        value: outer.value,
        err_estimate,
        evaluations: inner_evals.get(),
        converged: outer.converged
            && inner_converged.get()
            && err_estimate <= tol.target(outer.value),
    })
}

pub fn integrate2d<F>(h: F, xs: (f64, f64), ys: (f64, f64), tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    try_integrate2d(|x, y| Ok(h(x, y)), xs, ys, tol)
}

/// Cubature over the unit square `[0,1]^2`; `h` takes `(t, s)`.
pub fn try_integrate2d_unit<F>(h: F, tol: &Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    try_integrate2d(h, (0.0, 1.0), (0.0, 1.0), tol)
}

pub fn integrate2d_unit<F>(h: F, tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    try_integrate2d(|t, s| Ok(h(t, s)), (0.0, 1.0), (0.0, 1.0), tol)
}

/// `abcd/((b-a)(d-c)) * iint f(x,y)/(xy)^2 dx dy` over `r`, via `u = 1/x`,
/// `v = 1/y` in both variables.
pub fn try_harmonic_mean2d<F>(mut f: F, r: &Rect, tol: &Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    r.validate()?;
    let us = (1.0 / r.b, 1.0 / r.a);
    let vs = (1.0 / r.d, 1.0 / r.c);
    let area = (us.1 - us.0) * (vs.1 - vs.0);
    let inner = Tolerance {
        abs_tol: tol.abs_tol * area,
        ..*tol
    };
    let res = try_integrate2d(|u, v| f(1.0 / u, 1.0 / v), us, vs, &inner)?;
    Ok(res.scaled(1.0 / area))
}

/// Harmonic double mean of an expression over `r`.
pub fn harmonic_mean2d(f: &Expr, r: &Rect, tol: &Tolerance) -> Result<QuadResult> {
    let program = f.compile();
    try_harmonic_mean2d(|x, y| Ok(program.eval(x, y)?), r, tol)
}

/// Plain double mean `1/((b-a)(d-c)) * iint f` over `r`.
pub fn try_mean2d<F>(f: F, r: &Rect, tol: &Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    r.validate()?;
    let area = (r.b - r.a) * (r.d - r.c);
    let inner = Tolerance {
        abs_tol: tol.abs_tol * area,
        ..*tol
    };
    Ok(try_integrate2d(f, (r.a, r.b), (r.c, r.d), &inner)?.scaled(1.0 / area))
}

fn check_positive_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && a < b) {
        return Err(Error::InvalidParameter(format!(
            "harmonic mean needs 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}
