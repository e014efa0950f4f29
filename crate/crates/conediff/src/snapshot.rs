//! Curve snapshots as JSON documents, and plain node files.

use std::path::Path;

use anyhow::{bail, Context};
use conediff_core::geometry::{Cone, DiscreteCurve, Vec2};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// One curve at one time. `x`, `y`, `s` and `k` are parallel arrays over
/// the nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotDoc {
    pub schema_version: u32,
    pub t: f64,
    pub m: u32,
    pub theta1: f64,
    pub theta2: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    pub k: Vec<f64>,
}

impl SnapshotDoc {
    pub fn new(curve: &DiscreteCurve, cone: &Cone, t: f64, m: u32) -> Self {
        SnapshotDoc {
            schema_version: SCHEMA_VERSION,
            t,
            m,
            theta1: cone.theta1(),
            theta2: cone.theta2(),
            x: curve.nodes().iter().map(|p| p.x).collect(),
            y: curve.nodes().iter().map(|p| p.y).collect(),
            s: curve.s().to_vec(),
            k: curve.k().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("snapshot serialises");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let doc: SnapshotDoc = serde_json::from_str(text).context("malformed snapshot")?;
        if doc.schema_version != SCHEMA_VERSION {
            bail!(
                "snapshot schema version {} is not supported (expected {SCHEMA_VERSION})",
                doc.schema_version
            );
        }
        if doc.x.len() != doc.y.len() {
            bail!("snapshot has {} x values but {} y values", doc.x.len(), doc.y.len());
        }
        Ok(doc)
    }

    pub fn nodes(&self) -> Vec<Vec2> {
        self.x.iter().zip(&self.y).map(|(&x, &y)| Vec2::new(x, y)).collect()
    }

    pub fn cone(&self) -> anyhow::Result<Cone> {
        Ok(Cone::new(self.theta1, self.theta2)?)
    }
}

/// Reads `x y` pairs, one node per line, separated by whitespace or a comma.
/// `#` starts a comment.
pub fn parse_nodes(text: &str) -> anyhow::Result<Vec<Vec2>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            bail!("line {}: expected two coordinates", i + 1);
        }
        let x: f64 = fields[0].parse().with_context(|| format!("line {}: bad x", i + 1))?;
        let y: f64 = fields[1].parse().with_context(|| format!("line {}: bad y", i + 1))?;
        out.push(Vec2::new(x, y));
    }
    Ok(out)
}

/// Node list from a node file, or from a snapshot when the extension is
/// `.json`.
pub fn load_nodes(path: &Path) -> anyhow::Result<Vec<Vec2>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        Ok(SnapshotDoc::from_json(&text)?.nodes())
    } else {
        parse_nodes(&text).with_context(|| format!("in {}", path.display()))
    }
}

/// Node file text with every coordinate at full precision.
pub fn format_nodes(nodes: &[Vec2]) -> String {
    let mut out = String::new();
    for p in nodes {
        out.push_str(&format!("{:?} {:?}\n", p.x, p.y));
    }
    out
}
