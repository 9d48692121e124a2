//! Command-line front end: argument handling, report assembly and output.
//!
//! [`run`] does all the work and returns the exit code with the text that
//! would go to stdout and stderr, so the binary stays a thin wrapper and
//! tests can drive the tool in-process.

mod args;
pub mod render;
pub mod report;

use std::ffi::OsString;

use clap::Parser;
use hhcert::convexity::{self, ConvexityMode};
use hhcert::hh::{self, MixedPartial};
use hhcert::special::{self, BoundParams};
use hhcert::{Error, Expr, Rect, Tolerance};

use args::{Accuracy, Cli, Command, Format, Mode, Target};
use report::{Check, ConvexityResult, Inputs, Report, ReportResult, ScalarResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Accepted expression syntax, printed with usage errors.
pub const GRAMMAR: &str = "\
expression grammar:
  expr   := term (('+' | '-') term)*
  term   := factor (('*' | '/') factor)*
  factor := '-' factor | base ('^' factor)?
  base   := NUMBER | 'x' | 'y' | '(' expr ')' | FUNC '(' expr ')'
  FUNC   := exp | ln | sqrt | abs | sin | cos
'^' binds tighter than unary minus and is right-associative; there is no
implicit multiplication (write 2*x, not 2x).";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    error: Error,
    /// Expression text, kept to point at parse errors.
    expr: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, expr: None }
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let (code, stdout, stderr) = if e.use_stderr() {
                (EXIT_USAGE, String::new(), text)
            } else {
                (EXIT_OK, text, String::new())
            };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => render::json(&report),
                Format::Csv => render::csv(&report),
                Format::Text => render::text(&report),
            };
            let code = if report.refuted() { EXIT_REFUTED } else { EXIT_OK };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => {
            let mut stderr = format!("error: {}\n", f.error);
            if let (Error::Parse(p), Some(text)) = (&f.error, &f.expr) {
                let column = text[..p.offset.min(text.len())].chars().count();
                stderr.push_str(&format!("  {text}\n  {}^\n", " ".repeat(column)));
                stderr.push_str(GRAMMAR);
                stderr.push('\n');
            }
            Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    text.parse::<Expr>().map_err(|e| Failure {
        error: e.into(),
        expr: Some(text.to_string()),
    })
}

fn rect_of(target: &Target) -> Result<Rect> {
    let [a, b, c, d] = target.rect.ok_or_else(|| {
        Error::InvalidParameter("--rect a,b,c,d is required".to_string())
    })?;
    Ok(Rect::new(a, b, c, d)?)
}

fn tolerance(acc: &Accuracy) -> Result<Tolerance> {
    Ok(Tolerance::new(acc.tol, acc.tol)?)
}

fn mixed_partial(acc: &Accuracy) -> MixedPartial {
    if acc.fd {
        MixedPartial::FiniteDifference
    } else {
        MixedPartial::Symbolic
    }
}

fn partial_name(how: MixedPartial) -> &'static str {
    match how {
        MixedPartial::Symbolic => "symbolic",
        MixedPartial::FiniteDifference => "finite-difference",
    }
}

fn abs_warning(f: &Expr, how: MixedPartial) -> Option<String> {
    (how == MixedPartial::Symbolic && f.contains_abs()).then(|| {
        "expression contains abs; its symbolic derivative uses sign(0) = 0, \
         consider --fd"
            .to_string()
    })
}

fn core_mode(m: Mode) -> ConvexityMode {
    match m {
        Mode::HarmonicJoint => ConvexityMode::HarmonicJoint,
        Mode::HarmonicCoordinate => ConvexityMode::HarmonicCoordinate,
        Mode::ClassicalJoint => ConvexityMode::ClassicalJoint,
        Mode::ClassicalCoordinate => ConvexityMode::ClassicalCoordinate,
        Mode::Harmonic1d => ConvexityMode::Harmonic1D,
    }
}

fn execute(command: Command) -> Result<Report> {
    match command {
        Command::Check(args) => {
            let f = parse_expr(&args.target.expr)?;
            let r = rect_of(&args.target)?;
            let mode = core_mode(args.mode);
            let verdict = convexity::check_convexity(&f, &r, mode, args.grid, args.violation_tol)?;
            let mut result = ConvexityResult::from(verdict);
            if let (Some(budget), Some(_)) = (args.refine, &result.witness) {
                result.refined_witness = convexity::counterexample_search_with(
                    &f,
                    &r,
                    mode,
                    budget,
                    args.grid,
                    args.violation_tol,
                )?;
            }
            let inputs = Inputs {
                expr: Some(f.to_string()),
                rect: Some(r),
                mode: Some(mode.to_string()),
                grid: Some(args.grid),
                violation_tol: Some(args.violation_tol),
                refine: args.refine,
                ..Inputs::default()
            };
            let mut report = Report::new("check", inputs, ReportResult::Convexity(result));
            if let ReportResult::Convexity(c) = &report.result {
                if c.certified_on_grid {
                    report.warnings.push(format!(
                        "certificate covers the {0}x{0} lattice and t = k/{0} only",
                        args.grid
                    ));
                }
            }
            Ok(report)
        }
        Command::Chain(args) => {
            let f = parse_expr(&args.target.expr)?;
            let tol = tolerance(&args.accuracy)?;
            let mut inputs = Inputs {
                expr: Some(f.to_string()),
                tol: Some(args.accuracy.tol),
                ..Inputs::default()
            };
            let chain = if args.one_d {
                let [a, b] = match (args.interval, args.target.rect) {
                    (Some(ab), _) => ab,
                    (None, Some([a, b, _, _])) => [a, b],
                    (None, None) => {
                        return Err(Error::InvalidParameter(
                            "--one-d needs --interval a,b or --rect".to_string(),
                        )
                        .into())
                    }
                };
                inputs.interval = Some([a, b]);
                inputs.mode = Some("harmonic-1d".to_string());
                hh::chain_harmonic_1d(&f, a, b, &tol)?
            } else {
                let r = rect_of(&args.target)?;
                inputs.rect = Some(r);
                if args.classical {
                    inputs.mode = Some("classical".to_string());
                    hh::chain_classical_2d(&f, &r, &tol)?
                } else {
                    inputs.mode = Some("harmonic".to_string());
                    hh::chain_harmonic_2d(&f, &r, &tol)?
                }
            };
            Ok(Report::new("chain", inputs, ReportResult::Chain(chain)))
        }
        Command::Identity(args) => {
            let f = parse_expr(&args.target.expr)?;
            let r = rect_of(&args.target)?;
            let tol = tolerance(&args.accuracy)?;
            let how = mixed_partial(&args.accuracy);
            let identity = hh::identity_lemma_with(&f, &r, &tol, how)?;
            let inputs = Inputs {
                expr: Some(f.to_string()),
                rect: Some(r),
                tol: Some(args.accuracy.tol),
                mixed_partial: Some(partial_name(how)),
                ..Inputs::default()
            };
            let mut report = Report::new("identity", inputs, ReportResult::Identity(identity));
            report.warnings.extend(abs_warning(&f, how));
            Ok(report)
        }
        Command::Bound(args) => {
            let f = parse_expr(&args.target.expr)?;
            let r = rect_of(&args.target)?;
            let tol = tolerance(&args.accuracy)?;
            let how = mixed_partial(&args.accuracy);
            let bp = BoundParams::new(args.q)?;
            let bound = hh::bound_theorem_with(&f, &r, bp, &tol, how)?;
            let mut warnings = Vec::new();
            if args.preflight {
                let magnitude = hh::derivative_magnitude(&f, args.q);
                let mode = ConvexityMode::HarmonicCoordinate;
                match convexity::check_convexity(&magnitude, &r, mode, args.grid, convexity::DEFAULT_TOL) {
                    Ok(v) if v.certified_on_grid => {}
                    Ok(_) => warnings.push(format!(
                        "|f_xy|^{} is not harmonically convex on the coordinates; \
                         the bound's hypothesis fails",
                        args.q
                    )),
                    Err(e) => warnings.push(format!("pre-flight check failed: {e}")),
                }
            }
            if !bound.paper_form_consistent {
                warnings.push(format!(
                    "bound from the printed coefficients ({}) disagrees with the \
                     direct-moment bound ({}); the direct form decides",
                    bound.rhs_paper, bound.rhs_direct
                ));
            }
            warnings.extend(abs_warning(&f, how));
            let inputs = Inputs {
                expr: Some(f.to_string()),
                rect: Some(r),
                tol: Some(args.accuracy.tol),
                mixed_partial: Some(partial_name(how)),
                q: Some(args.q),
                preflight: Some(args.preflight),
                grid: args.preflight.then_some(args.grid),
                ..Inputs::default()
            };
            let mut report = Report::new("bound", inputs, ReportResult::Bound(bound));
            report.warnings = warnings;
            Ok(report)
        }
        Command::Hyp2f1(args) => {
            let ev = special::gauss2f1_checked(args.a, args.b, args.c, args.z)?;
            let value = special::gauss2f1(args.a, args.b, args.c, args.z)?;
            let result = ScalarResult {
                name: "2F1".to_string(),
                value,
                checks: vec![
                    Check {
                        method: "series",
                        value: ev.series,
                    },
                    Check {
                        method: "euler_integral",
                        value: ev.integral,
                    },
                ],
            };
            let inputs = Inputs {
                parameters: Some(vec![args.a, args.b, args.c, args.z]),
                ..Inputs::default()
            };
            Ok(Report::new("hyp2f1", inputs, ReportResult::Scalar(result)))
        }
        Command::Beta(args) => {
            let value = special::beta(args.x, args.y)?;
            let mut checks = Vec::new();
            if args.x >= 1.0 && args.y >= 1.0 {
                let tol = Tolerance::new(0.0, 1e-13)?;
                checks.push(Check {
                    method: "quadrature",
                    value: special::beta_by_quadrature(args.x, args.y, &tol)?,
                });
            }
            let result = ScalarResult {
                name: "B".to_string(),
                value,
                checks,
            };
            let inputs = Inputs {
                parameters: Some(vec![args.x, args.y]),
                ..Inputs::default()
            };
            Ok(Report::new("beta", inputs, ReportResult::Scalar(result)))
        }
    }
}

