//! Flat `key = value` run configuration.
//!
//! ```text
//! # quarter cone, perturbed arc
//! cone.theta1 = 1.5707963267948966
//! cone.theta2 = 0
//! init.type = perturbed
//! init.radius = 1
//! init.modes = 1:0.05, 2:-0.01
//! flow.N = 200
//! flow.t_end = 10
//! ```
//!
//! Keys are case-sensitive. Blank lines and text after `#` are ignored.
//! Unknown and repeated keys are errors that carry the line number.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use conediff_core::geometry::{Cone, MIN_SEGMENTS};
use thiserror::Error;

/// Where a value came from: a line of the file, or a command-line override.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override => f.write_str("override"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("{at}: unknown key `{key}`")]
    UnknownKey { at: Origin, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    Duplicate { line: usize, key: String, first: usize },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{at}: `{key}` expects {expected}, got `{value}`")]
    Type {
        at: Origin,
        key: String,
        expected: &'static str,
        value: String,
    },
    #[error("{at}: `{key}`: {reason}")]
    Invalid { at: Origin, key: String, reason: String },
    #[error("{0}")]
    Inconsistent(String),
}

const KEYS: &[&str] = &[
    "cone.theta1",
    "cone.theta2",
    "init.type",
    "init.radius",
    "init.area",
    "init.modes",
    "init.path",
    "flow.m",
    "flow.N",
    "flow.t_end",
    "flow.dt0",
    "flow.dt_min",
    "flow.dt_max",
    "flow.tol_step",
    "flow.rho_min",
    "flow.k2_cap",
    "flow.tol_c",
    "flow.tol_v",
    "flow.detect_convergence",
    "flow.fixed_dt",
    "flow.remesh_ratio",
    "flow.stiffness_c",
    "output.dir",
    "output.record_every",
    "output.snapshot_every",
    "output.svg_every",
    "checks.tol_A",
    "checks.tol_mono",
    "checks.tol_omega",
    "checks.tol_bounds",
    "checks.enable_bounds",
];

/// All recognised keys.
pub fn known_keys() -> &'static [&'static str] {
    KEYS
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcSize {
    Radius(f64),
    Area(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    Arc(ArcSize),
    Perturbed { radius: f64, modes: Vec<(u32, f64)> },
    /// Node file: whitespace or comma separated `x y` lines, or a snapshot
    /// document when the extension is `.json`.
    File(PathBuf),
}

/// Flow settings. `None` means "scale the default with the initial length".
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub m: u32,
    pub segments: Option<usize>,
    pub t_end: f64,
    pub dt0: Option<f64>,
    pub dt_min: Option<f64>,
    pub dt_max: Option<f64>,
    pub tol_step: Option<f64>,
    pub rho_min: Option<f64>,
    pub k2_cap: Option<f64>,
    pub tol_c: Option<f64>,
    pub tol_v: Option<f64>,
    pub detect_convergence: bool,
    pub fixed_dt: bool,
    pub remesh_ratio: Option<f64>,
    pub stiffness_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub record_every: usize,
    pub snapshot_every: usize,
    pub svg_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChecksConfig {
    /// Relative area drift allowed at any record.
    pub tol_a: f64,
    /// Allowed length increase between records, relative to `L0`.
    pub tol_mono: f64,
    pub tol_omega: f64,
    pub tol_bounds: f64,
    pub enable_bounds: bool,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig {
            tol_a: 1e-6,
            tol_mono: 1e-9,
            tol_omega: 1e-6,
            tol_bounds: 1e-2,
            enable_bounds: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cone: Cone,
    pub init: InitSpec,
    pub flow: FlowConfig,
    pub output: OutputConfig,
    pub checks: ChecksConfig,
}

impl RunConfig {
    /// Makes a relative `init.path` and `output.dir` relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let InitSpec::File(p) = &mut self.init {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if self.output.dir.is_relative() {
            self.output.dir = base.join(&self.output.dir);
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    at: Origin,
}

/// Key/value pairs with their origins, before interpretation.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax { line });
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    at: Origin::Line(line),
                    key: key.to_string(),
                });
            }
            if let Some(prev) = entries.get(key) {
                let first = match prev.at {
                    Origin::Line(n) => n,
                    Origin::Override => 0,
                };
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                    first,
                });
            }
            entries.insert(
                key.to_string(),
                Entry {
                    value: value.to_string(),
                    at: Origin::Line(line),
                },
            );
        }
        Ok(RawConfig { entries })
    }

    /// Sets or replaces `key`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                at: Origin::Override,
                key: key.to_string(),
            });
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.trim().to_string(),
                at: Origin::Override,
            },
        );
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn origin(&self, key: &str) -> Origin {
        self.entries.get(key).map(|e| e.at).unwrap_or(Origin::Override)
    }

    fn typed<T: std::str::FromStr>(&self, key: &'static str, expected: &'static str) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| ConfigError::Type {
                at: e.at,
                key: key.to_string(),
                expected,
                value: e.value.clone(),
            }),
        }
    }

    fn float(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.typed(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(self.invalid(key, "must be finite")),
            v => Ok(v),
        }
    }

    fn positive(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        match self.float(key)? {
            Some(x) if x <= 0.0 => Err(self.invalid(key, "must be positive")),
            v => Ok(v),
        }
    }

    fn count(&self, key: &'static str) -> Result<Option<usize>, ConfigError> {
        self.typed(key, "a nonnegative integer")
    }

    fn flag(&self, key: &'static str) -> Result<Option<bool>, ConfigError> {
        self.typed(key, "true or false")
    }

    fn required<T>(&self, v: Option<T>, key: &'static str) -> Result<T, ConfigError> {
        v.ok_or(ConfigError::Missing(key))
    }

    fn invalid(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            at: self.origin(key),
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    fn reject(&self, keys: &[&'static str], why: &str) -> Result<(), ConfigError> {
        for k in keys {
            if self.entries.contains_key(*k) {
                return Err(self.invalid(k, why));
            }
        }
        Ok(())
    }

    pub fn interpret(&self) -> Result<RunConfig, ConfigError> {
        let theta1 = self.required(self.float("cone.theta1")?, "cone.theta1")?;
        let theta2 = self.required(self.float("cone.theta2")?, "cone.theta2")?;
        let cone = Cone::new(theta1, theta2).map_err(|e| self.invalid("cone.theta1", e.to_string()))?;

        let kind = self.required(self.get("init.type"), "init.type")?;
        let init = match kind {
            "arc" => {
                self.reject(&["init.modes", "init.path"], "not used by init.type = arc")?;
                match (self.positive("init.radius")?, self.positive("init.area")?) {
                    (Some(r), None) => InitSpec::Arc(ArcSize::Radius(r)),
                    (None, Some(a)) => InitSpec::Arc(ArcSize::Area(a)),
                    (Some(_), Some(_)) => {
                        return Err(ConfigError::Inconsistent(
                            "give exactly one of init.radius and init.area".into(),
                        ))
                    }
                    (None, None) => return Err(ConfigError::Missing("init.radius")),
                }
            }
            "perturbed" => {
                self.reject(&["init.area", "init.path"], "not used by init.type = perturbed")?;
                let radius = self.required(self.positive("init.radius")?, "init.radius")?;
                let modes = match self.get("init.modes") {
                    Some(text) => parse_modes(text).map_err(|r| self.invalid("init.modes", r))?,
                    None => Vec::new(),
                };
                InitSpec::Perturbed { radius, modes }
            }
            "file" => {
                self.reject(&["init.radius", "init.area", "init.modes"], "not used by init.type = file")?;
                let path = self.required(self.get("init.path"), "init.path")?;
                if path.is_empty() {
                    return Err(self.invalid("init.path", "empty path"));
                }
                InitSpec::File(PathBuf::from(path))
            }
            other => {
                return Err(self.invalid(
                    "init.type",
                    format!("expected arc, perturbed or file, got `{other}`"),
                ))
            }
        };

        let m = self.typed::<u32>("flow.m", "an integer")?.unwrap_or(1);
        if !(1..=conediff_core::flow::MAX_ORDER).contains(&m) {
            return Err(self.invalid(
                "flow.m",
                format!("must be between 1 and {}", conediff_core::flow::MAX_ORDER),
            ));
        }
        let segments = self.count("flow.N")?;
        if let Some(n) = segments {
            if n < MIN_SEGMENTS {
                return Err(self.invalid("flow.N", format!("at least {MIN_SEGMENTS} segments")));
            }
        } else if !matches!(init, InitSpec::File(_)) {
            return Err(ConfigError::Missing("flow.N"));
        }
        let t_end = self.required(self.float("flow.t_end")?, "flow.t_end")?;
        if t_end < 0.0 {
            return Err(self.invalid("flow.t_end", "must be nonnegative"));
        }
        let remesh_ratio = self.float("flow.remesh_ratio")?;
        if let Some(r) = remesh_ratio {
            if r <= 1.0 {
                return Err(self.invalid("flow.remesh_ratio", "must exceed 1"));
            }
        }
        let flow = FlowConfig {
            m,
            segments,
            t_end,
            dt0: self.positive("flow.dt0")?,
            dt_min: self.positive("flow.dt_min")?,
            dt_max: self.positive("flow.dt_max")?,
            tol_step: self.positive("flow.tol_step")?,
            rho_min: self.positive("flow.rho_min")?,
            k2_cap: self.positive("flow.k2_cap")?,
            tol_c: self.positive("flow.tol_c")?,
            tol_v: self.positive("flow.tol_v")?,
            detect_convergence: self.flag("flow.detect_convergence")?.unwrap_or(true),
            fixed_dt: self.flag("flow.fixed_dt")?.unwrap_or(false),
            remesh_ratio,
            stiffness_c: self.positive("flow.stiffness_c")?,
        };
        if let (Some(lo), Some(hi)) = (flow.dt_min, flow.dt_max) {
            if lo > hi {
                return Err(ConfigError::Inconsistent("flow.dt_min exceeds flow.dt_max".into()));
            }
        }

        let output = OutputConfig {
            dir: PathBuf::from(self.get("output.dir").unwrap_or("out")),
            record_every: self.count("output.record_every")?.unwrap_or(1),
            snapshot_every: self.count("output.snapshot_every")?.unwrap_or(0),
            svg_every: self.count("output.svg_every")?.unwrap_or(0),
        };

        let d = ChecksConfig::default();
        let checks = ChecksConfig {
            tol_a: self.positive("checks.tol_A")?.unwrap_or(d.tol_a),
            tol_mono: self.positive("checks.tol_mono")?.unwrap_or(d.tol_mono),
            tol_omega: self.positive("checks.tol_omega")?.unwrap_or(d.tol_omega),
            tol_bounds: self.positive("checks.tol_bounds")?.unwrap_or(d.tol_bounds),
            enable_bounds: self.flag("checks.enable_bounds")?.unwrap_or(d.enable_bounds),
        };

        Ok(RunConfig {
            cone,
            init,
            flow,
            output,
            checks,
        })
    }
}

/// `"1:0.05, 3:-0.01"` into `[(1, 0.05), (3, -0.01)]`.
pub fn parse_modes(text: &str) -> Result<Vec<(u32, f64)>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (j, eps) = item
            .split_once(':')
            .ok_or_else(|| format!("mode `{item}` is not `j:eps`"))?;
        let j: u32 = j.trim().parse().map_err(|_| format!("bad mode number in `{item}`"))?;
        let eps: f64 = eps.trim().parse().map_err(|_| format!("bad amplitude in `{item}`"))?;
        if j == 0 {
            return Err("mode numbers start at 1".into());
        }
        if !eps.is_finite() {
            return Err(format!("amplitude of mode {j} is not finite"));
        }
        if out.iter().any(|&(k, _)| k == j) {
            return Err(format!("mode {j} listed twice"));
        }
        out.push((j, eps));
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RawConfig::parse(text)?.interpret()
}
