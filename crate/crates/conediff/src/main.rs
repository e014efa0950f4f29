use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{ArgGroup, Parser, Subcommand};
use conediff::config::RawConfig;
use conediff::runner::{execute, write_outputs, AppError, Exit};
use conediff::snapshot::SnapshotDoc;
use conediff::sweep::{run_sweep, split_values, thread_count};
use conediff::{build_report, RunConfig};
use conediff_core::diagnostics::smallness_threshold;
use conediff_core::geometry::{make_arc, ArcSpec, Cone};

#[derive(Parser)]
#[command(name = "conediff", version, about = "Curve diffusion flows of open curves in planar cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write its outputs.
    Run {
        config: PathBuf,
        /// Output directory, overriding `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configuration and check it; nonzero exit on any failed check.
    Verify {
        config: PathBuf,
        /// Also write outputs here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the stationary arc as a snapshot document.
    #[command(group(ArgGroup::new("size").required(true).args(["radius", "area"])))]
    Arc {
        #[arg(long, allow_hyphen_values = true)]
        theta1: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta2: f64,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        area: Option<f64>,
        #[arg(short = 'n', default_value_t = 200)]
        segments: usize,
    },
    /// Print the smallness threshold on K_osc for rotation number `omega`.
    Threshold {
        #[arg(long)]
        omega: f64,
    },
    /// Run one configuration per value of a key, in parallel.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Values separated by `,`, or by `;` when a value itself holds commas.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

fn load(path: &Path) -> Result<(RawConfig, PathBuf), AppError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(AppError::config)?;
    let raw = RawConfig::parse(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(AppError::config)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((raw, base))
}

fn config(path: &Path, out: Option<PathBuf>) -> Result<RunConfig, AppError> {
    let (raw, base) = load(path)?;
    let mut cfg = raw
        .interpret()
        .with_context(|| format!("in {}", path.display()))
        .map_err(AppError::config)?;
    cfg.resolve_paths(&base);
    if let Some(out) = out {
        cfg.output.dir = out;
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<Exit, AppError> {
    match cli.command {
        Command::Run { config: path, out } => {
            let cfg = config(&path, out)?;
            let exec = execute(&cfg)?;
            let report = build_report(&exec);
            write_outputs(&exec, &report)?;
            println!("{}", report.render_text().lines().next().unwrap_or_default());
            println!("outputs in {}", cfg.output.dir.display());
            Ok(match exec.exit(&report) {
                Exit::StepFloor => Exit::StepFloor,
                _ => Exit::Success,
            })
        }
        Command::Verify { config: path, out } => {
            let write = out.is_some();
            let cfg = config(&path, out)?;
            let exec = execute(&cfg)?;
            let report = build_report(&exec);
            if write {
                write_outputs(&exec, &report)?;
            }
            print!("{}", report.render_text());
            Ok(exec.exit(&report))
        }
        Command::Arc {
            theta1,
            theta2,
            radius,
            area,
            segments,
        } => {
            let cone = Cone::new(theta1, theta2).map_err(AppError::config)?;
            let spec = match (radius, area) {
                (Some(r), _) => ArcSpec::with_radius(cone, r),
                (_, Some(a)) => ArcSpec::with_area(cone, a),
                _ => unreachable!("clap requires one"),
            }
            .map_err(AppError::config)?;
            let curve = make_arc(&spec, segments).map_err(AppError::config)?;
            print!("{}", SnapshotDoc::new(&curve, &cone, 0.0, 1).to_json());
            Ok(Exit::Success)
        }
        Command::Threshold { omega } => {
            let t = smallness_threshold(omega).map_err(AppError::config)?;
            println!("{t:.6}");
            Ok(Exit::Success)
        }
        Command::Sweep { config: path, param, values } => {
            let (raw, base) = load(&path)?;
            let values = split_values(&values);
            if values.is_empty() {
                return Err(AppError::config(anyhow::anyhow!("--values is empty")));
            }
            let (root, rows) = run_sweep(&raw, &base, &param, &values, thread_count())?;
            print!("{}", conediff::sweep::summary_csv(&param, &rows));
            println!("summary in {}", root.join("summary.csv").display());
            Ok(if rows.iter().any(|r| r.termination == "StepFloor") {
                Exit::StepFloor
            } else {
                Exit::Success
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Config as u8 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
