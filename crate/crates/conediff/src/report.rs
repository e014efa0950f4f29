//! Verification checks over a finished run.
//!
//! Checks that only hold for initial data below the smallness threshold are
//! marked informational when the data is above it: they are evaluated and
//! reported but cannot fail the run.

use std::fmt::Write;

use conediff_core::diagnostics::boundary::{arc_radius_for_area, hausdorff_to_arc};
use conediff_core::diagnostics::{
    bounds::KOSC_FLOOR, check_bounds, decay_fit, kosc_margin, kosc_per_length, smallness_threshold, QuantityRecord,
};
use conediff_core::flow::TerminationKind;
use conediff_core::geometry::Ray;
use serde::Serialize;

use crate::runner::Execution;

/// Endpoint distance to its ray, relative to the length.
pub const ON_RAY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub informational: bool,
    /// Worst observed value.
    pub value: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub t: f64,
    pub length: f64,
    pub area: f64,
    pub kbar: f64,
    pub omega: f64,
    pub kosc: f64,
}

impl From<&QuantityRecord> for Summary {
    fn from(r: &QuantityRecord) -> Self {
        Summary {
            t: r.t,
            length: r.length,
            area: r.area,
            kbar: r.kbar,
            omega: r.omega,
            kosc: r.kosc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub termination: String,
    pub t_final: f64,
    pub detail: String,
    pub m: u32,
    pub segments: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub remeshes: usize,
    pub max_spacing_ratio: f64,
    pub initial: Summary,
    #[serde(rename = "final")]
    pub last: Summary,
    pub threshold: Option<f64>,
    pub below_threshold: bool,
    pub margin: f64,
    pub k2_cap: f64,
    /// Fitted exponential decay rate of K_osc / L.
    pub decay_rate: Option<f64>,
    pub blowup_exponent: Option<f64>,
    pub limit_arc_radius: f64,
    pub distance_to_limit_arc: f64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| !c.passed && !c.informational)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "termination {} at t = {:e} ({})",
            self.termination, self.t_final, self.detail
        );
        let _ = writeln!(
            out,
            "steps {} accepted, {} rejected, {} remeshes",
            self.accepted_steps, self.rejected_steps, self.remeshes
        );
        let th = self
            .threshold
            .map(|t| format!("{t:.6}"))
            .unwrap_or_else(|| "undefined".into());
        let _ = writeln!(
            out,
            "K_osc(0) = {:e}, threshold {th}, {}",
            self.initial.kosc,
            if self.below_threshold { "below" } else { "not below (bounds informational)" }
        );
        if let Some(r) = self.decay_rate {
            let _ = writeln!(out, "K_osc/L decay rate {r:.6}");
        }
        for c in &self.checks {
            let tag = match (c.passed, c.informational) {
                (true, _) => "PASS",
                (false, true) => "INFO",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "{tag} {:<18} {:e} (limit {:e})", c.name, c.value, c.limit);
        }
        out
    }
}

pub fn build_report(exec: &Execution) -> Report {
    let out = &exec.outcome;
    let checks_cfg = &exec.config.checks;
    let cone = &exec.config.cone;
    let records = out.records();
    let first = records[0];
    let last = *records.last().expect("at least one record");
    let l0 = first.length;

    let threshold = smallness_threshold(first.omega).ok();
    let below = threshold.is_some_and(|t| first.kosc < t);
    let margin = kosc_margin(&first).inclusive;

    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64, limit: f64, informational: bool| {
        checks.push(CheckResult {
            name: name.to_string(),
            passed: value <= limit,
            informational,
            value,
            limit,
        });
    };
    let mut bound_checks = Vec::new();

    let area_drift = records
        .iter()
        .map(|r| (r.area - first.area).abs() / first.area)
        .fold(0.0, f64::max);
    push("area_drift", area_drift, checks_cfg.tol_a, false);

    let rise = |f: fn(&QuantityRecord) -> f64| {
        records
            .windows(2)
            .map(|w| f(&w[1]) - f(&w[0]))
            .fold(0.0, f64::max)
    };
    push("length_monotone", rise(|r| r.length), checks_cfg.tol_mono * l0, false);

    let omega_drift = records
        .iter()
        .map(|r| (r.omega - first.omega).abs())
        .fold(0.0, f64::max);
    push("rotation_number", omega_drift, checks_cfg.tol_omega, false);

    let fin = &out.final_state.curve;
    let n = fin.segments();
    let off_ray = cone
        .distance_to_ray(Ray::First, fin.nodes()[0])
        .max(cone.distance_to_ray(Ray::Second, fin.nodes()[n]));
    push("endpoints_on_rays", off_ray, ON_RAY_TOL * fin.length(), false);

    push(
        "kosc_monotone",
        rise(|r| r.kosc),
        1e-8 * first.kosc + KOSC_FLOOR,
        !below,
    );
    let blew_up = out.status.kind == TerminationKind::CurvatureBlowup;
    push("no_blowup", if blew_up { 1.0 } else { 0.0 }, 0.0, !below);

    if checks_cfg.enable_bounds {
        let b = check_bounds(&records, &first, checks_cfg.tol_bounds);
        for c in &b.checks {
            // value is the relative excess over the bound
            bound_checks.push(CheckResult {
                name: c.name.to_string(),
                passed: c.passed,
                informational: b.informational,
                value: -c.worst_margin,
                limit: checks_cfg.tol_bounds,
            });
        }
    }
    checks.extend(bound_checks);

    let limit_arc_radius = arc_radius_for_area(cone, first.area);
    Report {
        termination: out.status.kind.as_str().to_string(),
        t_final: out.status.t_final,
        detail: out.status.detail.clone(),
        m: exec.config.flow.m,
        segments: exec.initial.segments(),
        accepted_steps: out.stats.accepted,
        rejected_steps: out.stats.rejected,
        remeshes: out.stats.remeshes,
        max_spacing_ratio: out.stats.max_spacing_ratio,
        initial: Summary::from(&first),
        last: Summary::from(&last),
        threshold,
        below_threshold: below,
        margin,
        k2_cap: out.k2_cap,
        decay_rate: decay_fit(&kosc_per_length(&records)).ok(),
        blowup_exponent: out.blowup_exponent,
        limit_arc_radius,
        distance_to_limit_arc: hausdorff_to_arc(fin, cone, limit_arc_radius),
        checks,
    }
}
