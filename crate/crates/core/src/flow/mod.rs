//! Time integration of `d/dt x = (-1)^(m+1) k_{s^{2m}} nu` with the ends on
//! the cone rays.

pub mod boundary;
pub mod operator;
pub mod remesh;
pub mod stepper;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use thiserror::Error;

use crate::diagnostics::fit::blowup_exponent;
use crate::diagnostics::{check_identities, measure, QuantityRecord, ResidualRecord};
use crate::geometry::{polygon_area, Cone, DiscreteCurve, GeometryError};
use crate::math;

pub use boundary::{apply_boundary, ghost_extension, BoundaryError, GhostExtension};
pub use operator::{normal_velocity, normal_velocity_of};
pub use remesh::remesh;
pub use stepper::{adapt_dt, implicit_step, DtLimits, StepFailure};

/// Highest supported flow order (limited by the stored derivative norms).
pub const MAX_ORDER: u32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("invalid flow parameter: {0}")]
    InvalidParams(String),
    #[error("initial curve: {0}")]
    Geometry(#[from] GeometryError),
    #[error("initial curve: {0}")]
    Boundary(#[from] BoundaryError),
}

/// Solver, termination and output settings. Lengths and times are absolute;
/// [`FlowParams::for_length`] derives the defaults from the initial length.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowParams {
    pub m: u32,
    pub t_end: f64,
    pub dt0: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Step-doubling tolerance on nodal positions, relative to `L0`.
    pub tol_step: f64,
    pub rho_min: f64,
    /// Cap on `int k^2 ds`; `None` uses `1e4 (K_osc(0) + 4 pi^2 w^2) / L_min`
    /// with `L_min` the length of the arc enclosing the initial area.
    pub k2_cap: Option<f64>,
    /// Converged once `max |k - kbar| <= tol_c |kbar|` ...
    pub tol_c: f64,
    /// ... and the last step moved no node faster than
    /// `tol_v |kbar|^(2m+1)`.
    pub tol_v: f64,
    pub detect_convergence: bool,
    /// Remesh once the longest/shortest segment ratio exceeds this.
    pub remesh_ratio: f64,
    pub stiffness_c: Option<f64>,
    /// Take every step at `dt0` without error control.
    pub fixed_dt: bool,
    /// Keep every n-th accepted step in the trajectory (0 keeps only the
    /// first and last state).
    pub record_every: usize,
    /// Keep a curve snapshot every n-th accepted step (0 disables).
    pub snapshot_every: usize,
}

impl FlowParams {
    pub fn for_length(l0: f64, t_end: f64) -> Self {
        let l4 = l0 * l0 * l0 * l0;
        FlowParams {
            m: 1,
            t_end,
            dt0: 1e-6 * l4,
            dt_min: 1e-14 * l4,
            dt_max: 1e-3 * l4,
            tol_step: 1e-7,
            rho_min: 1e-3 * l0,
            k2_cap: None,
            tol_c: 1e-6,
            tol_v: 1e-6,
            detect_convergence: true,
            remesh_ratio: 1.5,
            stiffness_c: None,
            fixed_dt: false,
            record_every: 1,
            snapshot_every: 0,
        }
    }

    pub fn for_curve(curve: &DiscreteCurve, t_end: f64) -> Self {
        Self::for_length(curve.length(), t_end)
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |what: &str| Err(FlowError::InvalidParams(String::from(what)));
        if self.m == 0 || self.m > MAX_ORDER {
            return Err(FlowError::InvalidParams(format!(
                "flow order m = {} outside 1..={MAX_ORDER}",
                self.m
            )));
        }
        if !(self.t_end >= 0.0) {
            return bad("t_end must be nonnegative");
        }
        let positive = [
            ("dt0", self.dt0),
            ("dt_min", self.dt_min),
            ("dt_max", self.dt_max),
            ("tol_step", self.tol_step),
            ("rho_min", self.rho_min),
            ("tol_c", self.tol_c),
            ("tol_v", self.tol_v),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(FlowError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if self.dt_min > self.dt_max {
            return bad("dt_min exceeds dt_max");
        }
        if !(self.remesh_ratio > 1.0) {
            return bad("remesh_ratio must exceed 1");
        }
        if let Some(c) = self.k2_cap {
            if !(c > 0.0) {
                return bad("k2_cap must be positive");
            }
        }
        if let Some(c) = self.stiffness_c {
            if !(c > 0.0) {
                return bad("stiffness_c must be positive");
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> DtLimits {
        DtLimits {
            dt_min: self.dt_min,
            dt_max: self.dt_max,
            stiffness_c: self.stiffness_c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub curve: DiscreteCurve,
    pub cone: Cone,
    pub t: f64,
    pub dt: f64,
    pub m: u32,
    pub cached: QuantityRecord,
}

impl FlowState {
    pub fn new(curve: DiscreteCurve, cone: Cone, m: u32, dt: f64) -> Self {
        let cached = measure(&curve, &cone, m, 0.0, dt);
        FlowState {
            curve,
            cone,
            t: 0.0,
            dt,
            m,
            cached,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationKind {
    Converged,
    TipReach,
    CurvatureBlowup,
    TimeLimit,
    StepFloor,
}

impl TerminationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationKind::Converged => "Converged",
            TerminationKind::TipReach => "TipReach",
            TerminationKind::CurvatureBlowup => "CurvatureBlowup",
            TerminationKind::TimeLimit => "TimeLimit",
            TerminationKind::StepFloor => "StepFloor",
        }
    }
}

impl core::fmt::Display for TerminationKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminationStatus {
    pub kind: TerminationKind,
    pub t_final: f64,
    pub detail: String,
}

/// Result of one accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct Accepted {
    pub state: FlowState,
    /// Largest node speed over the step, `max |x_new - x_old| / dt`.
    pub speed: f64,
    pub rejected: usize,
}

/// Why [`step`] could not produce an accepted step.
#[derive(Debug, Clone, PartialEq)]
pub enum StepStop {
    /// The step size fell below `dt_min`.
    Floor { last: StepFailure },
    /// Every admissible step moved an endpoint through the tip.
    Tip,
}

const CLIP_SLACK: f64 = 1e-9;

/// Advances one accepted step, shrinking the step size after failed solves
/// and after step-doubling error estimates above `tol_step * L0`.
pub fn step(state: &FlowState, params: &FlowParams, l0: f64) -> Result<Accepted, StepStop> {
    let limits = params.limits();
    let tol = params.tol_step * l0;
    let remaining = params.t_end - state.t;
    let mut dt = state.dt;
    let mut rejected = 0;
    let mut tip_hits = 0usize;
    let mut last_failure = StepFailure::OffRay;

    loop {
        // a step that would leave a sliver of round-off size ends on t_end
        let clipped = remaining > 0.0 && dt * (1.0 + CLIP_SLACK) >= remaining;
        let h = if clipped { remaining } else { dt };
        let attempt = if params.fixed_dt {
            implicit_step(&state.curve, &state.cone, state.m, h).map(|c| (c, 0.0))
        } else {
            doubled(&state.curve, &state.cone, state.m, h)
        };
        match attempt {
            Ok((curve, err)) if params.fixed_dt || err <= tol => {
                let speed = stepper::node_distance(&state.curve, &curve) / h;
                let t = if clipped { params.t_end } else { state.t + h };
                let next_dt = if params.fixed_dt {
                    dt
                } else if clipped {
                    dt.max(limits.dt_min)
                } else {
                    adapt_dt(h, err, tol, &limits, curve.mean_spacing(), state.m)
                };
                let cached = measure(&curve, &state.cone, state.m, t, h);
                return Ok(Accepted {
                    state: FlowState {
                        curve,
                        cone: state.cone,
                        t,
                        dt: next_dt,
                        m: state.m,
                        cached,
                    },
                    speed,
                    rejected,
                });
            }
            Ok((_, err)) => {
                dt = h * stepper::controller_factor(err, tol);
            }
            Err(f) => {
                if f == StepFailure::CrossesTip {
                    tip_hits += 1;
                }
                last_failure = f;
                dt = 0.5 * h;
            }
        }
        rejected += 1;
        if params.fixed_dt || dt < limits.dt_min {
            return Err(if tip_hits > 0 {
                StepStop::Tip
            } else {
                StepStop::Floor { last: last_failure }
            });
        }
    }
}

// One full step against two half steps; returns the half-step result and
// the largest nodal difference.
fn doubled(
    curve: &DiscreteCurve,
    cone: &Cone,
    m: u32,
    h: f64,
) -> Result<(DiscreteCurve, f64), StepFailure> {
    let full = implicit_step(curve, cone, m, h)?;
    let half = implicit_step(curve, cone, m, 0.5 * h)?;
    let two = implicit_step(&half, cone, m, 0.5 * h)?;
    let err = stepper::node_distance(&full, &two);
    Ok((two, err))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub curve: DiscreteCurve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub quantities: QuantityRecord,
    /// Residuals against the previous point (zero for the first).
    pub residuals: ResidualRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunStats {
    pub accepted: usize,
    pub rejected: usize,
    pub remeshes: usize,
    /// Largest longest/shortest segment ratio met after any step.
    pub max_spacing_ratio: f64,
    /// Largest `|A - A0| / A0` after any accepted step.
    pub max_area_drift: f64,
    /// Largest increase of `L` over a single accepted step.
    pub max_length_increase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub trajectory: Vec<TrajectoryPoint>,
    pub snapshots: Vec<Snapshot>,
    pub status: TerminationStatus,
    pub final_state: FlowState,
    pub stats: RunStats,
    /// Cap on `int k^2 ds` that was in force.
    pub k2_cap: f64,
    /// Fitted exponent `p` in `int k^2 ~ (T - t)^p` after a blow-up.
    pub blowup_exponent: Option<f64>,
}

impl RunOutcome {
    pub fn records(&self) -> Vec<QuantityRecord> {
        self.trajectory.iter().map(|p| p.quantities).collect()
    }
}

/// Default blow-up cap for an initial record in `cone`.
pub fn default_k2_cap(initial: &QuantityRecord, cone: &Cone) -> f64 {
    let l_min = math::sqrt(2.0 * initial.area * cone.opening());
    1e4 * (initial.kosc + 4.0 * PI * PI * initial.omega * initial.omega) / l_min
}

/// Runs the flow from `initial` until one of the termination criteria holds.
pub fn run(cone: &Cone, initial: &DiscreteCurve, params: &FlowParams) -> Result<RunOutcome, FlowError> {
    run_with(cone, initial, params, |_| {})
}

/// [`run`] with a callback invoked after every accepted step.
pub fn run_with<F: FnMut(&FlowState)>(
    cone: &Cone,
    initial: &DiscreteCurve,
    params: &FlowParams,
    mut on_step: F,
) -> Result<RunOutcome, FlowError> {
    params.validate()?;
    let curve = apply_boundary(initial.nodes(), cone, 0.0)?;
    let l0 = curve.length();
    let a0 = polygon_area(curve.nodes());
    let mut state = FlowState::new(curve, *cone, params.m, params.dt0.clamp(params.dt_min, params.dt_max));
    let k2_cap = params.k2_cap.unwrap_or_else(|| default_k2_cap(&state.cached, cone));

    let mut trajectory = alloc::vec![TrajectoryPoint {
        quantities: state.cached,
        residuals: ResidualRecord::default(),
    }];
    let mut snapshots = Vec::new();
    if params.snapshot_every > 0 {
        snapshots.push(Snapshot { step: 0, t: 0.0, curve: state.curve.clone() });
    }
    let mut stats = RunStats {
        max_spacing_ratio: state.curve.spacing_ratio(),
        ..Default::default()
    };
    let mut last_speed: Option<f64> = None;
    let mut steps = 0usize;

    let status = loop {
        let rec = &state.cached;
        if state.t >= params.t_end {
            break finish(TerminationKind::TimeLimit, state.t, format!("reached t_end = {}", params.t_end));
        }
        if rec.min_rho() < params.rho_min {
            break finish(
                TerminationKind::TipReach,
                state.t,
                format!(
                    "endpoint ray parameters ({:e}, {:e}) below rho_min = {:e}",
                    rec.rho_minus, rec.rho_plus, params.rho_min
                ),
            );
        }
        if rec.k2() > k2_cap || !rec.is_finite() {
            break finish(
                TerminationKind::CurvatureBlowup,
                state.t,
                format!("int k^2 ds = {:e} exceeds cap {:e}", rec.k2(), k2_cap),
            );
        }
        if params.detect_convergence {
            if let Some(speed) = last_speed {
                let kbar = rec.kbar.abs();
                let v_tol = params.tol_v * math::powi(kbar, 2 * params.m as i32 + 1);
                if rec.max_dev <= params.tol_c * kbar && speed <= v_tol {
                    break finish(
                        TerminationKind::Converged,
                        state.t,
                        format!(
                            "max |k - kbar| = {:e}, node speed = {:e}",
                            rec.max_dev, speed
                        ),
                    );
                }
            }
        }

        match step(&state, params, l0) {
            Ok(acc) => {
                stats.accepted += 1;
                stats.rejected += acc.rejected;
                stats.max_length_increase = stats
                    .max_length_increase
                    .max(acc.state.cached.length - state.cached.length);
                last_speed = Some(acc.speed);
                state = acc.state;
            }
            Err(StepStop::Tip) => {
                break finish(
                    TerminationKind::TipReach,
                    state.t,
                    String::from("every admissible step moves an endpoint through the tip"),
                );
            }
            Err(StepStop::Floor { last }) => {
                break finish(
                    TerminationKind::StepFloor,
                    state.t,
                    format!("step size below dt_min = {:e}; last failure: {last}", params.dt_min),
                );
            }
        }
        steps += 1;

        let ratio = state.curve.spacing_ratio();
        stats.max_spacing_ratio = stats.max_spacing_ratio.max(ratio);
        if ratio > params.remesh_ratio {
            if let Ok(c) = remesh(&state.curve) {
                stats.remeshes += 1;
                state.cached = measure(&c, cone, state.m, state.t, state.cached.dt);
                state.curve = c;
            }
        }
        stats.max_area_drift = stats
            .max_area_drift
            .max((state.cached.area - a0).abs() / a0);
        on_step(&state);

        if params.record_every > 0 && steps.is_multiple_of(params.record_every) {
            push_record(&mut trajectory, state.cached);
        }
        if params.snapshot_every > 0 && steps.is_multiple_of(params.snapshot_every) {
            snapshots.push(Snapshot { step: steps, t: state.t, curve: state.curve.clone() });
        }
    };

    if trajectory.last().map(|p| p.quantities.t) != Some(state.t) {
        push_record(&mut trajectory, state.cached);
    }
    if params.snapshot_every > 0 && snapshots.last().map(|s| s.step) != Some(steps) {
        snapshots.push(Snapshot { step: steps, t: state.t, curve: state.curve.clone() });
    }

    let blowup_exponent = if status.kind == TerminationKind::CurvatureBlowup {
        let records: Vec<QuantityRecord> = trajectory.iter().map(|p| p.quantities).collect();
        let floor = 10.0 * records[0].k2();
        blowup_exponent(&records, status.t_final, floor).ok()
    } else {
        None
    };

    Ok(RunOutcome {
        trajectory,
        snapshots,
        status,
        final_state: state,
        stats,
        k2_cap,
        blowup_exponent,
    })
}

fn finish(kind: TerminationKind, t_final: f64, detail: String) -> TerminationStatus {
    TerminationStatus { kind, t_final, detail }
}

fn push_record(trajectory: &mut Vec<TrajectoryPoint>, rec: QuantityRecord) {
    let residuals = trajectory
        .last()
        .map(|p| check_identities(&p.quantities, &rec))
        .unwrap_or_default();
    trajectory.push(TrajectoryPoint { quantities: rec, residuals });
}
