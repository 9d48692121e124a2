use std::fmt::Write as _;

use hhcert::convexity::{Witness, WitnessPoints};
use hhcert::hh::ChainKind;
use serde_json::{Number, Value};

use crate::report::{Report, ReportResult};

/// JSON with every float written to 17 significant digits.
pub fn json(report: &Report) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    normalize_floats(&mut value);
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

fn normalize_floats(value: &mut Value) {
    match value {
        Value::Number(n) => {
            let text = n.to_string();
            if text.contains(['.', 'e', 'E']) {
                let x: f64 = text.parse().expect("serialized float parses");
                *n = format!("{x:.16e}").parse::<Number>().expect("formatted float parses");
            }
        }
        Value::Array(items) => items.iter_mut().for_each(normalize_floats),
        Value::Object(map) => map.values_mut().for_each(normalize_floats),
        _ => {}
    }
}

/// Shortest round-trip form, switching to an exponent for very small or
/// large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |fields: &[String]| w.write_record(fields).expect("in-memory write");
    match &report.result {
        ReportResult::Chain(c) => {
            row(&["member", "value", "quad_error", "margin_to_next"].map(String::from));
            for (i, v) in c.values.iter().enumerate() {
                let margin = c.margins.get(i).map(|m| num(*m)).unwrap_or_default();
                row(&[(i + 1).to_string(), num(*v), num(c.quad_errors[i]), margin]);
            }
        }
        ReportResult::Bound(b) => {
            row(&["moment", "corner_partial", "direct", "direct_error"].map(String::from));
            let m = b.moments.as_array();
            for i in 0..4 {
                row(&[
                    format!("m{}", i + 1),
                    num(b.corner_partials[i]),
                    num(m[i]),
                    num(b.moments.errors[i]),
                ]);
            }
        }
        other => {
            row(&["key", "value"].map(String::from));
            for (k, v) in key_values(other) {
                row(&[k, v]);
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn key_values(result: &ReportResult) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |k: &str, v: String| out.push((k.to_string(), v));
    match result {
        ReportResult::Convexity(c) => {
            push("mode", c.mode.to_string());
            push("certified_on_grid", c.certified_on_grid.to_string());
            push("grid_n", c.grid_n.to_string());
            for (label, w) in [("witness", &c.witness), ("refined", &c.refined_witness)] {
                if let Some(w) = w {
                    push(&format!("{label}_points"), points(w));
                    push(&format!("{label}_t"), num(w.t));
                    push(&format!("{label}_lhs"), num(w.lhs));
                    push(&format!("{label}_rhs"), num(w.rhs));
                    push(&format!("{label}_violation"), num(w.violation));
                }
            }
        }
        ReportResult::Identity(i) => {
            push("lhs", num(i.lhs));
            push("rhs", num(i.rhs));
            push("residual", num(i.residual));
            push("combined_error", num(i.combined_error));
            push("residual_ok", i.residual_ok.to_string());
        }
        ReportResult::Scalar(s) => {
            push(&s.name, num(s.value));
            for c in &s.checks {
                push(c.method, num(c.value));
            }
        }
        ReportResult::Chain(_) | ReportResult::Bound(_) => unreachable!("tabulated separately"),
    }
    out
}

fn points(w: &Witness) -> String {
    match w.points {
        WitnessPoints::Planar { first, second } => {
            format!(
                "({}, {}) ({}, {})",
                num(first[0]),
                num(first[1]),
                num(second[0]),
                num(second[1])
            )
        }
        WitnessPoints::Scalar { first, second } => format!("{} {}", num(first), num(second)),
    }
}

pub fn text(report: &Report) -> String {
    let mut s = String::new();
    match &report.result {
        ReportResult::Convexity(c) => {
            let verdict = if c.certified_on_grid {
                format!("certified on the {0}x{0} lattice", c.grid_n)
            } else {
                "refuted".to_string()
            };
            let _ = writeln!(s, "{}: {verdict}", c.mode);
            for (label, w) in [("witness", &c.witness), ("refined", &c.refined_witness)] {
                if let Some(w) = w {
                    let _ = writeln!(s, "{label}: {} at t = {}", points(w), num(w.t));
                    let _ = writeln!(
                        s,
                        "  lhs = {}, rhs = {}, violation = {}",
                        num(w.lhs),
                        num(w.rhs),
                        num(w.violation)
                    );
                }
            }
        }
        ReportResult::Chain(c) => {
            let kind = match c.kind {
                ChainKind::Harmonic2D => "harmonic chain",
                ChainKind::Classical2D => "classical chain",
                ChainKind::Harmonic1D => "one-variable harmonic chain",
            };
            let _ = writeln!(s, "{kind}: {}", if c.ordering_ok { "ordered" } else { "NOT ordered" });
            for (i, v) in c.values.iter().enumerate() {
                let _ = write!(s, "  {}. {}  (err {})", i + 1, num(*v), num(c.quad_errors[i]));
                if let Some(m) = c.margins.get(i) {
                    let _ = write!(s, "  margin {}", num(*m));
                }
                s.push('\n');
            }
        }
        ReportResult::Identity(i) => {
            let _ = writeln!(s, "lhs      = {}", num(i.lhs));
            let _ = writeln!(s, "rhs      = {}", num(i.rhs));
            let allowed = i.combined_error + hhcert::hh::RESIDUAL_SLACK;
            let _ = writeln!(s, "residual = {}  (allowed {})", num(i.residual), num(allowed));
            let _ = writeln!(s, "identity: {}", if i.residual_ok { "holds" } else { "FAILS" });
        }
        ReportResult::Bound(b) => {
            let _ = writeln!(s, "q = {}, p = {}", num(b.q), num(b.p));
            let _ = writeln!(s, "|lhs|              = {}", num(b.lhs_abs));
            let _ = writeln!(s, "bound (direct)     = {}", num(b.rhs_direct));
            let _ = writeln!(s, "bound (printed C)  = {}", num(b.rhs_paper));
            let _ = writeln!(s, "bound: {}", if b.holds_direct { "holds" } else { "VIOLATED" });
            let _ = writeln!(
                s,
                "printed-coefficient form consistent: {}",
                b.paper_form_consistent
            );
        }
        ReportResult::Scalar(v) => {
            let _ = writeln!(s, "{} = {}", v.name, num(v.value));
            for c in &v.checks {
                let _ = writeln!(s, "  {}: {}", c.method, num(c.value));
            }
        }
    }
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}
