use hhcert::convexity::{ConvexityMode, ConvexityVerdict, Witness};
use hhcert::hh::{BoundReport, ChainReport, IdentityReport};
use hhcert::Rect;
use serde::Serialize;

/// Everything a command produced, in the shape written by `--format json`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Inputs,
    pub result: ReportResult,
    pub warnings: Vec<String>,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: &'static str, inputs: Inputs, result: ReportResult) -> Self {
        Report {
            command,
            inputs,
            result,
            warnings: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    /// True when the report contains a witness or a failed verdict.
    pub fn refuted(&self) -> bool {
        match &self.result {
            ReportResult::Convexity(c) => c.witness.is_some(),
            ReportResult::Chain(c) => !c.ordering_ok,
            ReportResult::Identity(i) => !i.residual_ok,
            ReportResult::Bound(b) => !b.holds_direct,
            ReportResult::Scalar(_) => false,
        }
    }
}

/// Echo of the parsed arguments; absent options are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rect: Option<Rect>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_partial: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preflight: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub enum ReportResult {
    Convexity(ConvexityResult),
    Chain(ChainReport),
    Identity(IdentityReport),
    Bound(BoundReport),
    Scalar(ScalarResult),
}

/// Lattice verdict plus the optionally refined witness.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexityResult {
    pub mode: ConvexityMode,
    pub certified_on_grid: bool,
    pub grid_n: usize,
    pub tol: f64,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined_witness: Option<Witness>,
}

impl From<ConvexityVerdict> for ConvexityResult {
    fn from(v: ConvexityVerdict) -> Self {
        ConvexityResult {
            mode: v.mode,
            certified_on_grid: v.certified_on_grid,
            grid_n: v.grid_n,
            tol: v.tol,
            witness: v.witness,
            refined_witness: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarResult {
    pub name: String,
    pub value: f64,
    /// Independent evaluations, when the value has a cross-check.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub method: &'static str,
    pub value: f64,
}
