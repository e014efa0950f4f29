//! From a validated configuration to a finished run and its files.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use conediff_core::diagnostics::boundary::arc_radius_for_area;
use conediff_core::flow::{run_with, FlowParams, RunOutcome, TerminationKind};
use conediff_core::geometry::{make_arc, ArcSpec, DiscreteCurve};
use conediff_core::initgen::{perturbed_arc, PerturbationSpec};

use crate::config::{ArcSize, InitSpec, RunConfig};
use crate::report::Report;
use crate::series::write_series;
use crate::snapshot::{load_nodes, SnapshotDoc};
use crate::svg::{render_svg, Overlay, View, DEFAULT_WIDTH};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    CheckFailure = 1,
    Config = 2,
    StepFloor = 3,
}

#[derive(Debug)]
pub struct AppError {
    pub exit: Exit,
    pub error: anyhow::Error,
}

impl AppError {
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        AppError {
            exit: Exit::Config,
            error: error.into(),
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub fn initial_curve(cfg: &RunConfig) -> anyhow::Result<DiscreteCurve> {
    let cone = &cfg.cone;
    let n = cfg.flow.segments;
    let curve = match &cfg.init {
        InitSpec::Arc(size) => {
            let spec = match *size {
                ArcSize::Radius(r) => ArcSpec::with_radius(*cone, r)?,
                ArcSize::Area(a) => ArcSpec::with_area(*cone, a)?,
            };
            make_arc(&spec, n.expect("validated"))?
        }
        InitSpec::Perturbed { radius, modes } => {
            let spec = PerturbationSpec::new(*radius, modes.clone())?;
            perturbed_arc(cone, &spec, n.expect("validated"))?
        }
        InitSpec::File(path) => {
            let nodes = load_nodes(path)?;
            let curve = DiscreteCurve::in_cone(nodes, cone)
                .with_context(|| format!("initial curve from {}", path.display()))?;
            if let Some(n) = n {
                if n != curve.segments() {
                    return Err(anyhow!(
                        "flow.N = {n} but {} holds {} segments",
                        path.display(),
                        curve.segments()
                    ));
                }
            }
            curve
        }
    };
    Ok(curve)
}

/// Defaults scaled with the initial length, then the configured overrides.
pub fn flow_params(cfg: &RunConfig, curve: &DiscreteCurve) -> FlowParams {
    let f = &cfg.flow;
    let mut p = FlowParams::for_curve(curve, f.t_end);
    p.m = f.m;
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut p.dt0, f.dt0);
    set(&mut p.dt_min, f.dt_min);
    set(&mut p.dt_max, f.dt_max);
    set(&mut p.tol_step, f.tol_step);
    set(&mut p.rho_min, f.rho_min);
    set(&mut p.tol_c, f.tol_c);
    set(&mut p.tol_v, f.tol_v);
    set(&mut p.remesh_ratio, f.remesh_ratio);
    p.k2_cap = f.k2_cap;
    p.stiffness_c = f.stiffness_c;
    p.detect_convergence = f.detect_convergence;
    p.fixed_dt = f.fixed_dt;
    p.record_every = cfg.output.record_every;
    p.snapshot_every = cfg.output.snapshot_every;
    p
}

pub struct Execution {
    pub config: RunConfig,
    pub initial: DiscreteCurve,
    pub params: FlowParams,
    pub outcome: RunOutcome,
    /// `(step, svg)` pairs.
    pub frames: Vec<(usize, String)>,
}

impl Execution {
    pub fn exit(&self, report: &Report) -> Exit {
        if self.outcome.status.kind == TerminationKind::StepFloor {
            Exit::StepFloor
        } else if report.failed() {
            Exit::CheckFailure
        } else {
            Exit::Success
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Execution, AppError> {
    let initial = initial_curve(cfg).map_err(AppError::config)?;
    let params = flow_params(cfg, &initial);
    let cone = cfg.cone;
    let view = View::fit(&initial, DEFAULT_WIDTH);
    let overlay = Overlay {
        arc_radius: Some(arc_radius_for_area(&cone, conediff_core::geometry::polygon_area(initial.nodes()))),
    };
    let every = cfg.output.svg_every;
    let mut frames = Vec::new();
    if every > 0 {
        frames.push((0, render_svg(&view, &cone, &initial, overlay)));
    }
    let mut steps = 0usize;
    let outcome = run_with(&cone, &initial, &params, |state| {
        steps += 1;
        if every > 0 && steps.is_multiple_of(every) {
            frames.push((steps, render_svg(&view, &cone, &state.curve, overlay)));
        }
    })
    // every flow error here is a rejected input
    .map_err(AppError::config)?;
    if every > 0 && frames.last().map(|f| f.0) != Some(steps) {
        frames.push((steps, render_svg(&view, &cone, &outcome.final_state.curve, overlay)));
    }
    Ok(Execution {
        config: cfg.clone(),
        initial,
        params,
        outcome,
        frames,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), AppError> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(AppError::config)
}

/// Writes `series.csv`, `final.json`, `report.json` and, when enabled,
/// `snapshots/` and `frames/` under the output directory.
pub fn write_outputs(exec: &Execution, report: &Report) -> Result<(), AppError> {
    let dir = &exec.config.output.dir;
    let mkdir = |p: &Path| {
        fs::create_dir_all(p)
            .with_context(|| format!("creating {}", p.display()))
            .map_err(AppError::config)
    };
    mkdir(dir)?;
    let out = &exec.outcome;
    let cone = &exec.config.cone;
    let m = exec.config.flow.m;

    let file = fs::File::create(dir.join("series.csv"))
        .with_context(|| format!("creating {}", dir.join("series.csv").display()))
        .map_err(AppError::config)?;
    write_series(std::io::BufWriter::new(file), &out.trajectory)
        .context("writing series.csv")
        .map_err(AppError::config)?;

    let fin = &out.final_state;
    write(&dir.join("final.json"), &SnapshotDoc::new(&fin.curve, cone, fin.t, m).to_json())?;
    write(&dir.join("report.json"), &report.to_json())?;

    if !out.snapshots.is_empty() {
        let sub = dir.join("snapshots");
        mkdir(&sub)?;
        for s in &out.snapshots {
            let doc = SnapshotDoc::new(&s.curve, cone, s.t, m);
            write(&sub.join(format!("snap_{:06}.json", s.step)), &doc.to_json())?;
        }
    }
    if !exec.frames.is_empty() {
        let sub = dir.join("frames");
        mkdir(&sub)?;
        for (step, svg) in &exec.frames {
            write(&sub.join(format!("frame_{step:06}.svg")), svg)?;
        }
    }
    Ok(())
}
