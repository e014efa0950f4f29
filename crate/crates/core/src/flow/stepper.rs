//! Linearly implicit time step and the step-doubling controller.
//!
//! Nodes move along their frozen motion normals, `x + delta_j n_j`, so the
//! endpoints slide along the rays. With curvature linearised as
//! `k(x + delta n) ~ k - (L_a + k^2) delta` the update solves
//!
//! ```text
//! (I + dt s_m P (L_a + diag k^2)) delta = dt s_m P k,   P = L_abar L_a^(m-1)
//! ```
//!
//! where the outer Laplacian uses cell lengths taken from the area gradient
//! at the midpoint configuration `x + delta n / 2`. Because every row of
//! `L_abar` is a flux difference, `sum abar_j delta_j = 0`, which is exactly
//! the change of polygon area. The midpoint weights are found by a short
//! fixed-point iteration and the remaining round-off is removed by a uniform
//! normal offset.

use alloc::vec::Vec;

use thiserror::Error;

use super::boundary::{apply_boundary, BoundaryError};
use super::operator::{flow_sign, laplacian_matrix};
use crate::banded::{BandMatrix, SolveError};
use crate::geometry::{polygon_area, Cone, DiscreteCurve, GeometryError, Vec2};
use crate::math;

const PICARD_MAX: usize = 8;
const PICARD_TOL: f64 = 1e-15;

/// Growth cap of the step controller.
pub const GROWTH_CAP: f64 = 1.25;
/// Largest single reduction of the step controller.
pub const SHRINK_CAP: f64 = 0.2;
/// Safety factor of the step controller.
pub const SAFETY: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepFailure {
    #[error("linear solve failed: {0}")]
    Solve(#[from] SolveError),
    #[error("an endpoint would cross the tip")]
    CrossesTip,
    #[error("update moved an endpoint off its ray")]
    OffRay,
    #[error("update produced an invalid curve: {0}")]
    Geometry(GeometryError),
}

impl From<BoundaryError> for StepFailure {
    fn from(e: BoundaryError) -> Self {
        match e {
            BoundaryError::TipReach { .. } => StepFailure::CrossesTip,
            BoundaryError::OutOfReach { .. } => StepFailure::OffRay,
            BoundaryError::Geometry(g) => StepFailure::Geometry(g),
        }
    }
}

/// Area gradient of the tip-closed polygon, projected on `normals`.
pub(crate) fn area_gradient(x: &[Vec2], normals: &[Vec2]) -> Vec<f64> {
    let n = x.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.5 * x[1].perp().dot(normals[0]));
    for j in 1..n {
        out.push(0.5 * (x[j + 1] - x[j - 1]).perp().dot(normals[j]));
    }
    out.push(-0.5 * x[n - 1].perp().dot(normals[n]));
    out
}

fn displaced(x: &[Vec2], normals: &[Vec2], delta: &[f64], factor: f64) -> Vec<Vec2> {
    x.iter()
        .zip(normals)
        .zip(delta)
        .map(|((&p, &n), &d)| p + n * (factor * d))
        .collect()
}

/// Normal displacement of one linearly implicit step of size `dt`.
pub fn implicit_displacement(
    curve: &DiscreteCurve,
    m: u32,
    dt: f64,
) -> Result<Vec<f64>, StepFailure> {
    let size = curve.segments() + 1;
    let h = curve.edge_lengths();
    let a = curve.dual_lengths();
    let k = curve.k();
    let x = curve.nodes();
    let normals = curve.motion_normals();
    let coef = dt * flow_sign(m);

    let lap = laplacian_matrix(h, a);
    let mut inner = BandMatrix::identity(size, 0, 0);
    for _ in 1..m {
        inner = lap.mul(&inner);
    }
    let mut stiff = lap.clone();
    for (j, kj) in k.iter().enumerate() {
        stiff.add(j, j, kj * kj);
    }
    let inner_stiff = inner.mul(&stiff);
    let inner_k = inner.mul_vec(k);

    let a_scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut abar = area_gradient(x, normals);
    let mut delta = Vec::new();
    for _ in 0..PICARD_MAX {
        let outer = laplacian_matrix(h, &abar);
        let mut sys = outer.mul(&inner_stiff);
        sys.scale(coef);
        for j in 0..size {
            sys.add(j, j, 1.0);
        }
        let rhs: Vec<f64> = outer.mul_vec(&inner_k).into_iter().map(|v| coef * v).collect();
        delta = sys.solve(&rhs)?;
        let mid = displaced(x, normals, &delta, 0.5);
        let next = area_gradient(&mid, normals);
        if next.iter().any(|v| !(*v > 0.0)) {
            return Err(StepFailure::Geometry(GeometryError::Folded { index: 0 }));
        }
        let change = next
            .iter()
            .zip(&abar)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        abar = next;
        if change <= PICARD_TOL * a_scale {
            break;
        }
    }

    // Whatever area error is left (round-off, unconverged weights) is
    // removed exactly by a uniform offset along the same normals.
    let target = polygon_area(x);
    let moved = displaced(x, normals, &delta, 1.0);
    if let Some(c) = area_offset(&moved, normals, target) {
        for d in &mut delta {
            *d += c;
        }
    }
    Ok(delta)
}

/// Common offset `c` along `dir` with `A(x + c dir) = target`.
pub(crate) fn area_offset(x: &[Vec2], dir: &[Vec2], target: f64) -> Option<f64> {
    let n = x.len() - 1;
    let a0 = polygon_area(x);
    let (mut a1, mut a2) = (0.0, 0.0);
    for e in 0..n {
        let (p, q, u, v) = (x[e], x[e + 1], dir[e], dir[e + 1]);
        a1 += -0.5 * (p.cross(v) + u.cross(q));
        a2 += -0.5 * u.cross(v);
    }
    let rhs = a0 - target;
    if rhs == 0.0 || a1 == 0.0 {
        return None;
    }
    let disc = a1 * a1 - 4.0 * a2 * rhs;
    let c = if disc >= 0.0 {
        rhs / (-0.5 * (a1 + a1.signum() * math::sqrt(disc)))
    } else {
        -rhs / a1
    };
    c.is_finite().then_some(c)
}

/// One linearly implicit step of size `dt`, followed by endpoint projection.
pub fn implicit_step(
    curve: &DiscreteCurve,
    cone: &Cone,
    m: u32,
    dt: f64,
) -> Result<DiscreteCurve, StepFailure> {
    let delta = implicit_displacement(curve, m, dt)?;
    let nodes = displaced(curve.nodes(), curve.motion_normals(), &delta, 1.0);
    Ok(apply_boundary(&nodes, cone, 0.0)?)
}

/// Step-size factor for a local error estimate `err` against `tol`.
pub fn controller_factor(err: f64, tol: f64) -> f64 {
    if err == 0.0 {
        return GROWTH_CAP;
    }
    (SAFETY * math::sqrt(tol / err)).clamp(SHRINK_CAP, GROWTH_CAP)
}

/// Step-size limits applied by [`adapt_dt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtLimits {
    pub dt_min: f64,
    pub dt_max: f64,
    /// `c` in the parabolic ceiling `c * ds^(2m+2)`; `None` disables it.
    pub stiffness_c: Option<f64>,
}

impl DtLimits {
    /// Upper limit for a curve with mean spacing `ds` and flow order `m`.
    pub fn ceiling(&self, ds: f64, m: u32) -> f64 {
        match self.stiffness_c {
            Some(c) => self.dt_max.min(c * math::powi(ds, 2 * m as i32 + 2)),
            None => self.dt_max,
        }
    }
}

/// Next step size after an error estimate `err` at step size `dt`.
pub fn adapt_dt(dt: f64, err: f64, tol: f64, limits: &DtLimits, ds: f64, m: u32) -> f64 {
    (dt * controller_factor(err, tol))
        .min(limits.ceiling(ds, m))
        .max(limits.dt_min)
}

/// Largest nodal distance between two curves with the same node count.
pub fn node_distance(a: &DiscreteCurve, b: &DiscreteCurve) -> f64 {
    a.nodes()
        .iter()
        .zip(b.nodes())
        .fold(0.0f64, |m, (p, q)| m.max((*p - *q).norm()))
}
