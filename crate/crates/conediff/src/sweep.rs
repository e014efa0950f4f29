//! Independent runs over the values of one configuration key.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::config::RawConfig;
use crate::report::build_report;
use crate::runner::{execute, write_outputs, AppError};

pub const THREADS_VAR: &str = "CONEDIFF_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: String,
    pub termination: String,
    pub t_final: f64,
    pub kosc_initial: f64,
    pub kosc_final: f64,
    pub below_threshold: bool,
    pub decay_rate: Option<f64>,
    /// "asserted" below the threshold, "informational" otherwise.
    pub status: String,
    pub checks_failed: bool,
}

/// Splits a value list on `;` when present, otherwise on `,`. Mode lists
/// such as `1:0.05,2:0.01` therefore need `;` between runs.
pub fn split_values(text: &str) -> Vec<String> {
    let sep = if text.contains(';') { ';' } else { ',' };
    text.split(sep)
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(String::from)
        .collect()
}

/// `CONEDIFF_THREADS` when set to a positive integer, else the available
/// parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn dir_name(key: &str, value: &str) -> String {
    let clean: String = value
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect();
    format!("{key}={clean}")
}

fn one(raw: &RawConfig, base: &Path, root: &Path, key: &str, value: &str) -> Result<SweepRow, AppError> {
    let mut raw = raw.clone();
    raw.set(key, value).map_err(AppError::config)?;
    let mut cfg = raw.interpret().map_err(AppError::config)?;
    cfg.resolve_paths(base);
    cfg.output.dir = root.join(dir_name(key, value));
    let exec = execute(&cfg)?;
    let report = build_report(&exec);
    write_outputs(&exec, &report)?;
    Ok(SweepRow {
        value: value.to_string(),
        termination: report.termination.clone(),
        t_final: report.t_final,
        kosc_initial: report.initial.kosc,
        kosc_final: report.last.kosc,
        below_threshold: report.below_threshold,
        decay_rate: report.decay_rate,
        status: if report.below_threshold { "asserted" } else { "informational" }.into(),
        checks_failed: report.failed(),
    })
}

/// Runs every value on up to `threads` workers. Rows come back in the order
/// of `values` whatever the parallelism.
pub fn run_sweep(
    raw: &RawConfig,
    base: &Path,
    key: &str,
    values: &[String],
    threads: usize,
) -> Result<(PathBuf, Vec<SweepRow>), AppError> {
    let mut probe = raw.clone();
    if let Some(v) = values.first() {
        probe.set(key, v).map_err(AppError::config)?;
    }
    let mut cfg = probe.interpret().map_err(AppError::config)?;
    cfg.resolve_paths(base);
    let root = cfg.output.dir;

    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<SweepRow, AppError>>>> = values.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, values.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= values.len() {
                    break;
                }
                let r = one(raw, base, &root, key, &values[i]);
                *slots[i].lock().expect("unpoisoned") = Some(r);
            });
        }
    });
    let mut rows = Vec::with_capacity(values.len());
    for slot in slots {
        rows.push(slot.into_inner().expect("unpoisoned").expect("every slot filled")?);
    }
    write_summary(&root, key, &rows)?;
    Ok((root, rows))
}

pub fn summary_csv(key: &str, rows: &[SweepRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        key,
        "termination",
        "t_final",
        "Kosc_initial",
        "Kosc_final",
        "below_threshold",
        "decay_rate",
        "status",
    ])
    .expect("in memory");
    for r in rows {
        w.write_record([
            r.value.clone(),
            r.termination.clone(),
            r.t_final.to_string(),
            r.kosc_initial.to_string(),
            r.kosc_final.to_string(),
            r.below_threshold.to_string(),
            r.decay_rate.map(|v| v.to_string()).unwrap_or_default(),
            r.status.clone(),
        ])
        .expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

fn write_summary(root: &Path, key: &str, rows: &[SweepRow]) -> Result<(), AppError> {
    std::fs::create_dir_all(root).map_err(AppError::config)?;
    std::fs::write(root.join("summary.csv"), summary_csv(key, rows)).map_err(AppError::config)
}
