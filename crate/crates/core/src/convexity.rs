//! Lattice certification and refutation of convexity predicates.
//!
//! For a pair of points `P`, `Q` and a weight `t`, every predicate compares
//! `f(M(P, Q, t))` against `t f(P) + (1-t) f(Q)`, where `M` is taken
//! coordinate-wise: the weighted arithmetic mean `tp + (1-t)q` in the
//! classical modes and the weighted harmonic mean `pq / (tq + (1-t)p)` in the
//! harmonic modes. A certificate only ever speaks for the lattice that was
//! scanned.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::{Expr, Program, Var};
use crate::quad::Rect;
use crate::{Error, Result};

/// Violation tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvexityMode {
    /// Joint harmonic convexity on the rectangle.
    HarmonicJoint,
    /// Harmonic convexity of every horizontal and vertical slice.
    HarmonicCoordinate,
    ClassicalJoint,
    ClassicalCoordinate,
    /// Harmonic convexity of a function of one variable on `[a, b]`.
    Harmonic1D,
}

impl ConvexityMode {
    pub const ALL: [ConvexityMode; 5] = [
        ConvexityMode::HarmonicJoint,
        ConvexityMode::HarmonicCoordinate,
        ConvexityMode::ClassicalJoint,
        ConvexityMode::ClassicalCoordinate,
        ConvexityMode::Harmonic1D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConvexityMode::HarmonicJoint => "harmonic-joint",
            ConvexityMode::HarmonicCoordinate => "harmonic-coordinate",
            ConvexityMode::ClassicalJoint => "classical-joint",
            ConvexityMode::ClassicalCoordinate => "classical-coordinate",
            ConvexityMode::Harmonic1D => "harmonic-1d",
        }
    }

    pub fn is_harmonic(self) -> bool {
        !matches!(
            self,
            ConvexityMode::ClassicalJoint | ConvexityMode::ClassicalCoordinate
        )
    }

    fn is_coordinate(self) -> bool {
        matches!(
            self,
            ConvexityMode::HarmonicCoordinate | ConvexityMode::ClassicalCoordinate
        )
    }
}

impl fmt::Display for ConvexityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConvexityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvexityMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown mode `{s}`, expected one of {}",
                    ConvexityMode::ALL.map(|m| m.name()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WitnessPoints {
    /// `(x, y)` and `(z, w)` in the rectangle.
    Planar { first: [f64; 2], second: [f64; 2] },
    /// Two abscissae of a one-variable function.
    Scalar { first: f64, second: f64 },
}

/// A point pair and weight at which the predicate fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: WitnessPoints,
    pub t: f64,
    /// `f` at the weighted mean of the two points.
    pub lhs: f64,
    /// `t f(first) + (1-t) f(second)`.
    pub rhs: f64,
    pub violation: f64,
}

impl Witness {
    fn planar(&self) -> ([f64; 2], [f64; 2]) {
        match self.points {
            WitnessPoints::Planar { first, second } => (first, second),
            WitnessPoints::Scalar { first, second } => ([first, first], [second, second]),
        }
    }

    /// Re-evaluates the defining inequality at the witness data.
    pub fn recheck(&self, f: &Expr, mode: ConvexityMode) -> Result<f64> {
        let (p, q) = self.planar();
        let (lhs, rhs) = inequality_at(&f.compile(), mode, p, q, self.t)?;
        Ok(lhs - rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityVerdict {
    pub mode: ConvexityMode,
    pub certified_on_grid: bool,
    pub grid_n: usize,
    pub tol: f64,
    pub witness: Option<Witness>,
}

fn mean(mode: ConvexityMode, p: f64, q: f64, t: f64) -> f64 {
    if p == q {
        p
    } else if mode.is_harmonic() {
        p * q / (t * q + (1.0 - t) * p)
    } else {
        t * p + (1.0 - t) * q
    }
}

/// Both sides of the predicate for the pair `p`, `q` at weight `t`:
/// `(f(M(p, q, t)), t f(p) + (1-t) f(q))`.
pub fn inequality_at(
    f: &Program,
    mode: ConvexityMode,
    p: [f64; 2],
    q: [f64; 2],
    t: f64,
) -> Result<(f64, f64)> {
    let fp = f.eval(p[0], p[1])?;
    let fq = f.eval(q[0], q[1])?;
    let lhs = f.eval(mean(mode, p[0], q[0], t), mean(mode, p[1], q[1], t))?;
    Ok((lhs, t * fp + (1.0 - t) * fq))
}

struct Lattice<'a> {
    f: &'a Program,
    mode: ConvexityMode,
    xs: Vec<f64>,
    ys: Vec<f64>,
    ts: Vec<f64>,
    values: Vec<f64>,
}

/// Candidate order key: `(P index, Q index, t index)`.
type Key = (usize, usize, usize);

impl<'a> Lattice<'a> {
    fn new(f: &'a Program, r: &Rect, mode: ConvexityMode, grid_n: usize) -> Result<Self> {
        let axis = |lo: f64, hi: f64| -> Vec<f64> {
            (0..grid_n)
                .map(|i| {
                    if i + 1 == grid_n {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (grid_n - 1) as f64
                    }
                })
                .collect()
        };
        let xs = axis(r.a, r.b);
        // one-variable functions are evaluated at (u, u)
        let ys = if mode == ConvexityMode::Harmonic1D {
            vec![f64::NAN]
        } else {
            axis(r.c, r.d)
        };
        let ts = (0..=grid_n).map(|k| k as f64 / grid_n as f64).collect();
        let mut lattice = Lattice {
            f,
            mode,
            xs,
            ys,
            ts,
            values: Vec::new(),
        };
        lattice.values = (0..lattice.points())
            .map(|i| {
                let p = lattice.point(i);
                f.eval(p[0], p[1])
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(lattice)
    }

    fn points(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    fn point(&self, index: usize) -> [f64; 2] {
        let (i, j) = (index / self.ys.len(), index % self.ys.len());
        if self.mode == ConvexityMode::Harmonic1D {
            [self.xs[i], self.xs[i]]
        } else {
            [self.xs[i], self.ys[j]]
        }
    }

    /// Partners `Q > P` in lexicographic order.
    fn partners(&self, index: usize) -> Vec<usize> {
        let ny = self.ys.len();
        let (i, j) = (index / ny, index % ny);
        if self.mode.is_coordinate() {
            let same_x = (j + 1..ny).map(|l| i * ny + l);
            let same_y = (i + 1..self.xs.len()).map(|k| k * ny + j);
            same_x.chain(same_y).collect()
        } else {
            (index + 1..self.points()).collect()
        }
    }

    fn candidate(&self, key: Key) -> Result<Witness> {
        let (pi, qi, ti) = key;
        let (p, q, t) = (self.point(pi), self.point(qi), self.ts[ti]);
        let lhs = self
            .f
            .eval(mean(self.mode, p[0], q[0], t), mean(self.mode, p[1], q[1], t))?;
        let rhs = t * self.values[pi] + (1.0 - t) * self.values[qi];
        Ok(make_witness(self.mode, p, q, t, lhs, rhs))
    }

    fn first_violation(&self, tol: f64) -> Result<Option<Witness>> {
        (0..self.points())
            .into_par_iter()
            .map(|pi| -> Result<Option<Witness>> {
                let nt = self.ts.len();
                let mut batch = self.f.batch();
                let (mut xs, mut ys, mut lhs) = (vec![0.0; nt], vec![0.0; nt], vec![0.0; nt]);
                let p = self.point(pi);
                for qi in self.partners(pi) {
                    let q = self.point(qi);
                    for (ti, &t) in self.ts.iter().enumerate() {
                        xs[ti] = mean(self.mode, p[0], q[0], t);
                        ys[ti] = mean(self.mode, p[1], q[1], t);
                    }
                    if batch.eval(&xs, &ys, &mut lhs).is_err() {
                        // replay point by point so a violation before the failure wins
                        for ti in 0..nt {
                            let w = self.candidate((pi, qi, ti))?;
                            if w.violation > tol {
                                return Ok(Some(w));
                            }
                        }
                        continue;
                    }
                    for (ti, &t) in self.ts.iter().enumerate() {
                        let rhs = t * self.values[pi] + (1.0 - t) * self.values[qi];
                        if lhs[ti] - rhs > tol {
                            return Ok(Some(make_witness(self.mode, p, q, t, lhs[ti], rhs)));
                        }
                    }
                }
                Ok(None)
            })
            .find_map_first(|r| r.transpose())
            .transpose()
    }

    fn worst_violation(&self) -> Result<Option<(Key, Witness)>> {
        (0..self.points())
            .into_par_iter()
            .map(|pi| -> Result<Option<(Key, Witness)>> {
                let nt = self.ts.len();
                let mut batch = self.f.batch();
                let (mut xs, mut ys, mut lhs) = (vec![0.0; nt], vec![0.0; nt], vec![0.0; nt]);
                let p = self.point(pi);
                let mut best: Option<(Key, Witness)> = None;
                for qi in self.partners(pi) {
                    let q = self.point(qi);
                    for (ti, &t) in self.ts.iter().enumerate() {
                        xs[ti] = mean(self.mode, p[0], q[0], t);
                        ys[ti] = mean(self.mode, p[1], q[1], t);
                    }
                    batch.eval(&xs, &ys, &mut lhs)?;
                    for (ti, &t) in self.ts.iter().enumerate() {
                        let rhs = t * self.values[pi] + (1.0 - t) * self.values[qi];
                        let w = make_witness(self.mode, p, q, t, lhs[ti], rhs);
                        best = pick(best, Some(((pi, qi, ti), w)));
                    }
                }
                Ok(best)
            })
            .try_reduce(|| None, |a, b| Ok(pick(a, b)))
    }
}

// Larger violation wins; ties go to the earlier key.
fn pick(a: Option<(Key, Witness)>, b: Option<(Key, Witness)>) -> Option<(Key, Witness)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let better = b.1.violation > a.1.violation
                || (b.1.violation == a.1.violation && b.0 < a.0);
            Some(if better { b } else { a })
        }
    }
}

fn make_witness(
    mode: ConvexityMode,
    p: [f64; 2],
    q: [f64; 2],
    t: f64,
    lhs: f64,
    rhs: f64,
) -> Witness {
    let points = if mode == ConvexityMode::Harmonic1D {
        WitnessPoints::Scalar {
            first: p[0],
            second: q[0],
        }
    } else {
        WitnessPoints::Planar {
            first: p,
            second: q,
        }
    };
    Witness {
        points,
        t,
        lhs,
        rhs,
        violation: lhs - rhs,
    }
}

fn prepare(f: &Expr, r: &Rect, mode: ConvexityMode, grid_n: usize) -> Result<Program> {
    r.validate()?;
    if grid_n < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid_n must be at least 3, got {grid_n}"
        )));
    }
    if mode == ConvexityMode::Harmonic1D && f.contains(Var::X) && f.contains(Var::Y) {
        return Err(Error::NotUnivariate(f.to_string()));
    }
    Ok(f.compile())
}

/// Scans a `grid_n x grid_n` lattice of `r` (or `grid_n` points of `[a, b]`
/// in [`ConvexityMode::Harmonic1D`]) against every weight `t = k / grid_n`.
///
/// Coordinate modes only pair points on a common horizontal or vertical line.
/// Pairs are scanned with `P < Q` lexicographically, which covers the
/// reversed pair through `t -> 1 - t`, and the first violation above `tol` in
/// `(x, y, z, w, t)` order is returned.
pub fn check_convexity(
    f: &Expr,
    r: &Rect,
    mode: ConvexityMode,
    grid_n: usize,
    tol: f64,
) -> Result<ConvexityVerdict> {
    let program = prepare(f, r, mode, grid_n)?;
    let lattice = Lattice::new(&program, r, mode, grid_n)?;
    let witness = lattice.first_violation(tol)?;
    Ok(ConvexityVerdict {
        mode,
        certified_on_grid: witness.is_none(),
        grid_n,
        tol,
        witness,
    })
}

/// Lattice size of the initial scan in [`counterexample_search`].
pub const SEARCH_GRID: usize = 16;

/// Finds the largest violation on a coarse lattice, then refines around it.
///
/// Each round tries every combination of `-h/2, 0, +h/2` offsets on the free
/// coordinates and the weight, keeps the best, and halves `h`. Returns the
/// witness with the largest violation above [`DEFAULT_TOL`], if any.
pub fn counterexample_search(
    f: &Expr,
    r: &Rect,
    mode: ConvexityMode,
    budget: usize,
) -> Result<Option<Witness>> {
    counterexample_search_with(f, r, mode, budget, SEARCH_GRID, DEFAULT_TOL)
}

pub fn counterexample_search_with(
    f: &Expr,
    r: &Rect,
    mode: ConvexityMode,
    budget: usize,
    grid_n: usize,
    tol: f64,
) -> Result<Option<Witness>> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let program = prepare(f, r, mode, grid_n)?;
    let lattice = Lattice::new(&program, r, mode, grid_n)?;
    let Some((_, start)) = lattice.worst_violation()? else {
        return Ok(None);
    };
    if !(start.violation > tol) {
        return Ok(None);
    }

    let (p, q) = start.planar();
    let hx = (r.b - r.a) / (grid_n - 1) as f64;
    let hy = (r.d - r.c) / (grid_n - 1) as f64;
    let ht = 1.0 / grid_n as f64;

    // free parameters with their bounds and step sizes
    let row_slice = p[1] == q[1];
    let (mut params, bounds, mut steps): (Vec<f64>, Vec<(f64, f64)>, Vec<f64>) = match mode {
        ConvexityMode::HarmonicJoint | ConvexityMode::ClassicalJoint => (
            vec![p[0], p[1], q[0], q[1], start.t],
            vec![(r.a, r.b), (r.c, r.d), (r.a, r.b), (r.c, r.d), (0.0, 1.0)],
            vec![hx, hy, hx, hy, ht],
        ),
        ConvexityMode::Harmonic1D => (
            vec![p[0], q[0], start.t],
            vec![(r.a, r.b), (r.a, r.b), (0.0, 1.0)],
            vec![hx, hx, ht],
        ),
        _ if row_slice => (
            vec![p[1], p[0], q[0], start.t],
            vec![(r.c, r.d), (r.a, r.b), (r.a, r.b), (0.0, 1.0)],
            vec![hy, hx, hx, ht],
        ),
        _ => (
            vec![p[0], p[1], q[1], start.t],
            vec![(r.a, r.b), (r.c, r.d), (r.c, r.d), (0.0, 1.0)],
            vec![hx, hy, hy, ht],
        ),
    };
    let to_pair = |v: &[f64]| -> ([f64; 2], [f64; 2], f64) {
        match mode {
            ConvexityMode::HarmonicJoint | ConvexityMode::ClassicalJoint => {
                ([v[0], v[1]], [v[2], v[3]], v[4])
            }
            ConvexityMode::Harmonic1D => ([v[0], v[0]], [v[1], v[1]], v[2]),
            _ if row_slice => ([v[1], v[0]], [v[2], v[0]], v[3]),
            _ => ([v[0], v[1]], [v[0], v[2]], v[3]),
        }
    };

    let mut best = start;
    let dims = params.len();
    let combos = 3usize.pow(dims as u32);
    for _ in 0..budget {
        for s in steps.iter_mut() {
            *s *= 0.5;
        }
        let mut round_best = best;
        let mut round_params = params.clone();
        for combo in 0..combos {
            let mut code = combo;
            let trial: Vec<f64> = (0..dims)
                .map(|k| {
                    let offset = (code % 3) as f64 - 1.0;
                    code /= 3;
                    (params[k] + offset * steps[k]).clamp(bounds[k].0, bounds[k].1)
                })
                .collect();
            let (tp, tq, tt) = to_pair(&trial);
            if tp == tq {
                continue;
            }
            let (lhs, rhs) = match inequality_at(&program, mode, tp, tq, tt) {
                Ok(v) => v,
                Err(Error::Domain(_)) => continue,
                Err(e) => return Err(e),
            };
            let w = make_witness(mode, tp, tq, tt, lhs, rhs);
            if w.violation > round_best.violation {
                round_best = w;
                round_params = trial;
            }
        }
        best = round_best;
        params = round_params;
    }
    Ok(Some(best))
}
