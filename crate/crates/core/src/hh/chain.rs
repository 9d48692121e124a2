use serde::{Deserialize, Serialize};

use crate::expr::{Expr, Program, Var};
use crate::quad::{
    try_harmonic_mean1d, try_harmonic_mean2d, try_mean1d, try_mean2d, QuadResult, Rect,
    Tolerance,
};
use crate::{Error, Result};

/// Absolute slack added to the quadrature errors when judging a margin.
pub const ORDERING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainKind {
    Harmonic2D,
    Classical2D,
    Harmonic1D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub kind: ChainKind,
    /// Members from the midpoint value up to the corner or endpoint average.
    pub values: Vec<f64>,
    /// `values[i + 1] - values[i]`.
    pub margins: Vec<f64>,
    pub quad_errors: Vec<f64>,
    pub ordering_ok: bool,
}

impl ChainReport {
    fn new(kind: ChainKind, members: Vec<(f64, f64)>) -> Self {
        let (values, quad_errors): (Vec<f64>, Vec<f64>) = members.into_iter().unzip();
        let margins: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let ordering_ok = margins
            .iter()
            .enumerate()
            .all(|(i, m)| *m >= -(quad_errors[i] + quad_errors[i + 1] + ORDERING_SLACK));
        ChainReport {
            kind,
            values,
            margins,
            quad_errors,
            ordering_ok,
        }
    }
}

fn exact(v: f64) -> (f64, f64) {
    (v, 0.0)
}

fn member(r: QuadResult) -> (f64, f64) {
    (r.value, r.err_estimate)
}

fn average(parts: &[(f64, f64)]) -> (f64, f64) {
    let n = parts.len() as f64;
    let value = crate::quad::compensated_sum(parts.iter().map(|p| p.0)) / n;
    let err = parts.iter().map(|p| p.1).sum::<f64>() / n;
    (value, err)
}

fn corner_average(f: &Program, r: &Rect) -> Result<(f64, f64)> {
    let corners = r
        .corners()
        .iter()
        .map(|&(x, y)| f.eval(x, y).map(exact))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(average(&corners))
}

/// Three-member chain of a one-variable `g` on `[a, b]`: the value at the
/// harmonic midpoint, the harmonic mean `ab/(b-a) int g/x^2`, and the
/// endpoint average.
pub fn chain_harmonic_1d(g: &Expr, a: f64, b: f64, tol: &Tolerance) -> Result<ChainReport> {
    if g.contains(Var::X) && g.contains(Var::Y) {
        return Err(Error::NotUnivariate(g.to_string()));
    }
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "interval must satisfy 0 < a < b, got [{a}, {b}]"
        )));
    }
    let p = g.compile();
    let at = |v: f64| -> Result<f64> { Ok(p.eval(v, v)?) };
    let mid = at(2.0 * a * b / (a + b))?;
    let mean = try_harmonic_mean1d(at, a, b, tol)?;
    let ends = 0.5 * (at(a)? + at(b)?);
    Ok(ChainReport::new(
        ChainKind::Harmonic1D,
        vec![exact(mid), member(mean), exact(ends)],
    ))
}

/// Five-member harmonic chain on `r`: midpoint value, average of the two
/// mid-line harmonic means, harmonic double mean, average of the four edge
/// harmonic means, corner average.
pub fn chain_harmonic_2d(f: &Expr, r: &Rect, tol: &Tolerance) -> Result<ChainReport> {
    r.validate()?;
    let p = f.compile();
    let (hx, hy) = (r.harmonic_mid_x(), r.harmonic_mid_y());
    let along_x = |y: f64| try_harmonic_mean1d(|x| Ok(p.eval(x, y)?), r.a, r.b, tol).map(member);
    let along_y = |x: f64| try_harmonic_mean1d(|y| Ok(p.eval(x, y)?), r.c, r.d, tol).map(member);

    let mid = exact(p.eval(hx, hy)?);
    let mid_lines = average(&[along_x(hy)?, along_y(hx)?]);
    let double = member(try_harmonic_mean2d(|x, y| Ok(p.eval(x, y)?), r, tol)?);
    let edges = average(&[along_x(r.c)?, along_x(r.d)?, along_y(r.a)?, along_y(r.b)?]);
    let corners = corner_average(&p, r)?;
    Ok(ChainReport::new(
        ChainKind::Harmonic2D,
        vec![mid, mid_lines, double, edges, corners],
    ))
}

/// Four-member chain with arithmetic means: midpoint value, average of the
/// two mid-line means, double mean, corner average.
pub fn chain_classical_2d(f: &Expr, r: &Rect, tol: &Tolerance) -> Result<ChainReport> {
    r.validate()?;
    let p = f.compile();
    let (mx, my) = (r.mid_x(), r.mid_y());
    let mid = exact(p.eval(mx, my)?);
    let mid_lines = average(&[
        member(try_mean1d(|x| Ok(p.eval(x, my)?), r.a, r.b, tol)?),
        member(try_mean1d(|y| Ok(p.eval(mx, y)?), r.c, r.d, tol)?),
    ]);
    let double = member(try_mean2d(|x, y| Ok(p.eval(x, y)?), r, tol)?);
    let corners = corner_average(&p, r)?;
    Ok(ChainReport::new(
        ChainKind::Classical2D,
        vec![mid, mid_lines, double, corners],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(s: &str) -> Expr {
        s.parse().unwrap()
    }

    fn r12_13() -> Rect {
        Rect::new(1.0, 2.0, 1.0, 3.0).unwrap()
    }

    #[test]
    fn one_dimensional_examples() {
        let tol = Tolerance::default();
        let c = chain_harmonic_1d(&expr("1"), 1.0, 2.0, &tol).unwrap();
        assert_eq!(c.values, vec![1.0, 1.0, 1.0]);
        assert!(c.margins.iter().all(|m| *m == 0.0));

        let c = chain_harmonic_1d(&expr("1/x"), 1.0, 2.0, &tol).unwrap();
        for v in &c.values {
            assert!((v - 0.75).abs() < 1e-12);
        }

        let c = chain_harmonic_1d(&expr("x"), 1.0, 2.0, &tol).unwrap();
        let expected = [4.0 / 3.0, 2.0 * 2f64.ln(), 1.5];
        for (v, e) in c.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!(c.ordering_ok);

        let c = chain_harmonic_1d(&expr("y^2"), 1.0, 2.0, &tol).unwrap();
        assert!(c.ordering_ok);
        assert!(chain_harmonic_1d(&expr("x*y"), 1.0, 2.0, &tol).is_err());
        assert!(chain_harmonic_1d(&expr("x"), 2.0, 1.0, &tol).is_err());
    }

    #[test]
    fn product_chain_matches_closed_forms() {
        // x-means on [1,2]: harmonic 2ln2, midpoint 4/3; y on [1,3]: 1.5 ln3, 1.5
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        let (hx, hy) = (4.0 / 3.0, 1.5);
        let (mx, my) = (2.0 * l2, 1.5 * l3);
        let expected = [
            hx * hy,
            0.5 * (mx * hy + hx * my),
            mx * my,
            0.25 * (mx * 1.0 + mx * 3.0 + 1.0 * my + 2.0 * my),
            3.0,
        ];
        let c = chain_harmonic_2d(&expr("x*y"), &r12_13(), &Tolerance::default()).unwrap();
        for (v, e) in c.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-10, "{v} vs {e}");
        }
        let frozen = [2.0, 2.138_333_1, 2.284_500_0, 2.622_233_0, 3.0];
        for (v, e) in c.values.iter().zip(frozen) {
            assert!((v - e).abs() < 1e-6);
        }
        assert!(c.ordering_ok);
        assert_eq!(c.margins.len(), 4);
    }

    #[test]
    fn reciprocal_product_is_flat() {
        let c = chain_harmonic_2d(&expr("1/(x*y)"), &r12_13(), &Tolerance::default()).unwrap();
        for v in &c.values {
            assert!((v - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn classical_examples() {
        let tol = Tolerance::default();
        let c = chain_classical_2d(&expr("x*y"), &r12_13(), &tol).unwrap();
        for v in &c.values {
            assert!((v - 3.0).abs() < 1e-12);
        }
        let c = chain_classical_2d(&expr("x^2*y^2"), &r12_13(), &tol).unwrap();
        assert_eq!(c.values[0], 9.0);
        assert!((c.values[1] - 0.5 * (4.0 * 7.0 / 3.0 + 2.25 * 13.0 / 3.0)).abs() < 1e-12);
        assert!((c.values[2] - 7.0 / 3.0 * 13.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.values[3], 12.5);
        assert!(c.ordering_ok);
    }

    #[test]
    fn violated_ordering_is_reported() {
        // -x*y is harmonically concave in each variable
        let c = chain_harmonic_2d(&expr("-x*y"), &r12_13(), &Tolerance::default()).unwrap();
        assert!(!c.ordering_ok);
    }
}
