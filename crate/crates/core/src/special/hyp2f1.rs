use serde::{Deserialize, Serialize};

use super::beta;
use crate::quad::{try_integrate1d, NeumaierSum, Tolerance};
use crate::{Error, Result};

const SERIES_STOP: f64 = 1e-16;
const MAX_TERMS: usize = 1_000_000;
/// Required agreement between the series and the Euler integral.
pub const AGREEMENT: f64 = 1e-10;

/// Both evaluations of `2F1(a, b; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2f1Evaluation {
    pub series: f64,
    pub integral: f64,
    pub terms: usize,
    /// `|series - integral| / (1 + |series|)`
    pub discrepancy: f64,
}

fn check_params(b: f64, c: f64, z: f64) -> Result<()> {
    if !(c > b && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "2F1 requires c > b > 0, got b = {b}, c = {c}"
        )));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::InvalidParameter(format!(
            "2F1 requires 0 <= z < 1, got z = {z}"
        )));
    }
    Ok(())
}

/// Gauss series `sum (a)_n (b)_n / ((c)_n n!) z^n`, stopped once a term
/// falls below `1e-16` of the partial sum. Returns the value and the number
/// of terms used.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<(f64, usize)> {
    check_params(b, c, z)?;
    let mut sum = NeumaierSum::new();
    sum.add(1.0);
    let mut term = 1.0_f64;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum.add(term);
        if term == 0.0 || term.abs() <= SERIES_STOP * sum.value().abs() {
            return Ok((sum.value(), n + 1));
        }
    }
    Err(Error::NotConverged {
        what: format!("2F1({a}, {b}; {c}; {z}) series"),
        best: sum.value(),
    })
}

/// Euler integral `1/B(b, c-b) * int_0^1 t^(b-1) (1-t)^(c-b-1) (1-zt)^(-a) dt`.
///
/// The interval is split at 1/2 and each half is mapped by `t = u^(1/b)` and
/// `1 - t = v^(1/(c-b))` so the endpoint powers disappear.
pub fn hyp2f1_euler(a: f64, b: f64, c: f64, z: f64, tol: &Tolerance) -> Result<f64> {
    check_params(b, c, z)?;
    let e = c - b;
    let kernel = |t: f64| (1.0 - z * t).powf(-a);
    let left = try_integrate1d(
        |u| {
            let t = u.powf(1.0 / b);
            Ok((1.0 - t).powf(e - 1.0) * kernel(t))
        },
        0.0,
        0.5_f64.powf(b),
        tol,
    )?;
    let right = try_integrate1d(
        |v| {
            let t = 1.0 - v.powf(1.0 / e);
            Ok(t.powf(b - 1.0) * kernel(t))
        },
        0.0,
        0.5_f64.powf(e),
        tol,
    )?;
    if !(left.converged && right.converged) {
        return Err(Error::NotConverged {
            what: format!("2F1({a}, {b}; {c}; {z}) Euler integral"),
            best: (left.value / b + right.value / e) / beta(b, e)?,
        });
    }
    Ok((left.value / b + right.value / e) / beta(b, e)?)
}

fn oracle_tolerance() -> Tolerance {
    Tolerance {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        ..Tolerance::default()
    }
}

/// Evaluates `2F1(a, b; c; z)` by series and by Euler integral and reports both.
pub fn gauss2f1_checked(a: f64, b: f64, c: f64, z: f64) -> Result<Hyp2f1Evaluation> {
    let (series, terms) = hyp2f1_series(a, b, c, z)?;
    let integral = hyp2f1_euler(a, b, c, z, &oracle_tolerance())?;
    Ok(Hyp2f1Evaluation {
        series,
        integral,
        terms,
        discrepancy: (series - integral).abs() / (1.0 + series.abs()),
    })
}

/// Gauss hypergeometric function for `c > b > 0`, `0 <= z < 1`.
///
/// Returns the series value after asserting agreement with the Euler
/// integral to `1e-10 * (1 + |value|)`.
pub fn gauss2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let ev = gauss2f1_checked(a, b, c, z)?;
    if !(ev.discrepancy <= AGREEMENT) {
        return Err(Error::OracleMismatch {
            what: format!("2F1({a}, {b}; {c}; {z})"),
            primary: ev.series,
            oracle: ev.integral,
        });
    }
    Ok(ev.series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_one() {
        for &(a, b, c) in &[(2.0, 1.0, 2.0), (-3.5, 0.5, 4.0), (6.0, 2.0, 3.0)] {
            assert_eq!(gauss2f1(a, b, c, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn logarithm_identity() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let v = gauss2f1(1.0, 1.0, 2.0, 0.5).unwrap();
        assert!((v - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn binomial_identity() {
        // 2F1(a,b;b;z) = (1-z)^-a; with a = 2, b = 1, c = 2 swap the first two
        // parameters: 2F1(2,1;2;z) = 2F1(1,2;2;z) = (1-z)^-1
        let v = gauss2f1(2.0, 1.0, 2.0, 0.5).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let v = gauss2f1(3.0, 1.0, 2.0, 0.5).unwrap();
        // int_0^1 (1 - t/2)^-3 dt = ((1/2)^-2 - 1) / (2 * 1/2) = 3
        assert!((v - 3.0).abs() < 1e-13);
    }

    #[test]
    fn singular_endpoints_are_mapped_away() {
        // b < 1 and c - b < 1: both endpoint factors blow up
        let ev = gauss2f1_checked(1.5, 0.5, 1.25, 0.3).unwrap();
        assert!(ev.discrepancy < 1e-10, "{ev:?}");
    }

    #[test]
    fn parameter_violations() {
        assert!(gauss2f1(1.0, 2.0, 2.0, 0.5).is_err());
        assert!(gauss2f1(1.0, 0.0, 2.0, 0.5).is_err());
        assert!(gauss2f1(1.0, 1.0, 2.0, 1.0).is_err());
        assert!(gauss2f1(1.0, 1.0, 2.0, -0.1).is_err());
    }

    #[test]
    fn series_gives_up_near_one() {
        let z = 1.0 - 1e-9;
        assert!(matches!(
            hyp2f1_series(1.0, 1.0, 2.0, z),
            Err(Error::NotConverged { .. })
        ));
    }
}
