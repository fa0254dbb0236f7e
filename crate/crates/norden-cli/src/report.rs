//! Report rendering: fixed-schema JSON rows and per-suite human tables.

use norden_core::{CheckReport, ClassReport};
use serde::Serialize;

/// The stable machine schema. Field names and order are part of the
/// contract; identical runs must serialize byte-identically.
#[derive(Serialize)]
pub struct ReportRow<'a> {
    pub check: &'a str,
    pub hypothesis: &'a str,
    pub points_tested: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub status: &'a str,
    pub details: &'a [f64],
}

impl<'a> ReportRow<'a> {
    pub fn from_report(r: &'a CheckReport) -> ReportRow<'a> {
        ReportRow {
            check: &r.check_id,
            hypothesis: r.hypothesis.as_str(),
            points_tested: r.points_tested,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            status: r.status.as_str(),
            details: &r.details,
        }
    }
}

pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from_report).collect();
    serde_json::to_string(&rows).expect("serializable")
}

/// Human-readable table: one block per check with per-point rows.
pub fn render_report_table(r: &CheckReport, out: &mut String) {
    use std::fmt::Write;
    let _ = writeln!(
        out,
        "== {}  [hypothesis: {}]  tolerance {:.3e}",
        r.check_id,
        r.hypothesis.as_str(),
        r.tolerance
    );
    if r.status == norden_core::Status::Skipped {
        let _ = writeln!(
            out,
            "   skipped{}",
            r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
        return;
    }
    let _ = writeln!(out, "   point  residual     verdict");
    for (i, v) in r.details.iter().enumerate() {
        let verdict = if *v <= r.tolerance { "ok" } else { "FAIL" };
        let _ = writeln!(out, "   {i:<6} {v:<12.3e} {verdict}");
    }
    let _ = writeln!(
        out,
        "   status: {} (max {:.3e} over {} points)",
        r.status.as_str(),
        r.max_residual,
        r.points_tested
    );
    if let Some(note) = &r.note {
        let _ = writeln!(out, "   note: {note}");
    }
}

/// Per-point classification row for `classify --json`.
#[derive(Serialize)]
pub struct ClassRow {
    pub point: usize,
    pub residual_w0: f64,
    pub residual_w1: f64,
    pub residual_w2_cyclic: f64,
    pub residual_theta: f64,
    pub residual_w3_cyclic: f64,
    pub residual_w12_cyclic: f64,
    pub member_w0: bool,
    pub member_w1: bool,
    pub member_w2: bool,
    pub member_w3: bool,
    pub member_w12: bool,
}

impl ClassRow {
    pub fn new(point: usize, r: &ClassReport) -> ClassRow {
        ClassRow {
            point,
            residual_w0: r.residual_w0,
            residual_w1: r.residual_w1,
            residual_w2_cyclic: r.residual_w2_cyclic,
            residual_theta: r.residual_theta,
            residual_w3_cyclic: r.residual_w3_cyclic,
            residual_w12_cyclic: r.residual_w12_cyclic,
            member_w0: r.member_w0,
            member_w1: r.member_w1,
            member_w2: r.member_w2,
            member_w3: r.member_w3,
            member_w12: r.member_w12,
        }
    }
}

pub fn render_class_table(rows: &[ClassRow], threshold: f64, out: &mut String) {
    use std::fmt::Write;
    let _ = writeln!(out, "class residuals at threshold {threshold:.3e}");
    let _ = writeln!(
        out,
        "   point  W0           W1           W2-cyclic    theta        W3-cyclic    members"
    );
    for r in rows {
        let mut members = String::new();
        for (flag, name) in [
            (r.member_w0, "W0"),
            (r.member_w1, "W1"),
            (r.member_w2, "W2"),
            (r.member_w3, "W3"),
            (r.member_w12, "W1+W2"),
        ] {
            if flag {
                if !members.is_empty() {
                    members.push(' ');
                }
                members.push_str(name);
            }
        }
        if members.is_empty() {
            members.push('-');
        }
        let _ = writeln!(
            out,
            "   {:<6} {:<12.3e} {:<12.3e} {:<12.3e} {:<12.3e} {:<12.3e} {members}",
            r.point, r.residual_w0, r.residual_w1, r.residual_w2_cyclic, r.residual_theta,
            r.residual_w3_cyclic
        );
    }
    // aggregate row
    let agg = |f: fn(&ClassRow) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    let _ = writeln!(
        out,
        "   max    {:<12.3e} {:<12.3e} {:<12.3e} {:<12.3e} {:<12.3e}",
        agg(|r| r.residual_w0),
        agg(|r| r.residual_w1),
        agg(|r| r.residual_w2_cyclic),
        agg(|r| r.residual_theta),
        agg(|r| r.residual_w3_cyclic),
    );
}
