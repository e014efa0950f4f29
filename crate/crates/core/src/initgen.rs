//! Initial curves compatible with the boundary conditions.
//!
//! Curves are radial graphs over the cone, `rho(theta) = r (1 + sum eps_j
//! cos(j pi (theta1 - theta) / phi))`. Every odd `theta`-derivative of a
//! cosine mode vanishes at both rays, so the graph meets each ray at a right
//! angle and its curvature has zero odd arclength derivatives there.

use alloc::vec::Vec;
use core::f64::consts::PI;

use thiserror::Error;

use crate::diagnostics::boundary::end_derivative;
use crate::geometry::{Cone, DiscreteCurve, GeometryError, Ray, Vec2};
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InitError {
    #[error("base radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),
    #[error("mode numbers start at 1")]
    ZeroMode,
    #[error("non-finite amplitude for mode {0}")]
    NonFiniteAmplitude(u32),
    #[error("sum of |eps_j| is {0}, must stay below 1")]
    AmplitudeTooLarge(f64),
    #[error("radial graph is not positive at node {0}")]
    NonPositiveGraph(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Base radius plus cosine modes `(j, eps_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    base_radius: f64,
    modes: Vec<(u32, f64)>,
}

impl PerturbationSpec {
    pub fn new(base_radius: f64, modes: Vec<(u32, f64)>) -> Result<Self, InitError> {
        if !(base_radius > 0.0) || !base_radius.is_finite() {
            return Err(InitError::NonPositiveRadius(base_radius));
        }
        let mut sum = 0.0;
        for &(j, eps) in &modes {
            if j == 0 {
                return Err(InitError::ZeroMode);
            }
            if !eps.is_finite() {
                return Err(InitError::NonFiniteAmplitude(j));
            }
            sum += eps.abs();
        }
        if !(sum < 1.0) {
            return Err(InitError::AmplitudeTooLarge(sum));
        }
        Ok(PerturbationSpec { base_radius, modes })
    }

    pub fn base_radius(&self) -> f64 {
        self.base_radius
    }

    pub fn modes(&self) -> &[(u32, f64)] {
        &self.modes
    }

    /// Radial graph at angle `theta`.
    pub fn radius_at(&self, cone: &Cone, theta: f64) -> f64 {
        let x = (cone.theta1() - theta) / cone.opening();
        let bump: f64 = self
            .modes
            .iter()
            .map(|&(j, eps)| eps * math::cos(j as f64 * PI * x))
            .sum();
        self.base_radius * (1.0 + bump)
    }
}

/// Samples the radial graph at `segments + 1` uniformly spaced angles.
pub fn perturbed_arc(
    cone: &Cone,
    spec: &PerturbationSpec,
    segments: usize,
) -> Result<DiscreteCurve, InitError> {
    let mut nodes = Vec::with_capacity(segments + 1);
    for i in 0..=segments {
        let theta = if i == segments {
            cone.theta2()
        } else {
            cone.theta1() - cone.opening() * i as f64 / segments as f64
        };
        let rho = spec.radius_at(cone, theta);
        if !(rho > 0.0) {
            return Err(InitError::NonPositiveGraph(i));
        }
        nodes.push(Vec2::polar(rho, theta));
    }
    Ok(DiscreteCurve::in_cone(nodes, cone)?)
}

/// Boundary-condition residuals of a curve, first ray then second ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    /// `|<nu, e>|` with `e` the inward ray normal; zero for a right angle.
    pub tangency: [f64; 2],
    /// One-sided `|k_s|`.
    pub ks: [f64; 2],
    /// Distance of each endpoint to its ray.
    pub on_ray: [f64; 2],
    /// Smaller endpoint distance to the tip.
    pub tip_distance: f64,
}

impl CompatibilityReport {
    pub fn worst(&self) -> f64 {
        self.tangency
            .iter()
            .chain(&self.ks)
            .chain(&self.on_ray)
            .fold(0.0f64, |m, v| m.max(*v))
    }
}

pub fn compatibility_check(curve: &DiscreteCurve, cone: &Cone) -> CompatibilityReport {
    let x = curve.nodes();
    let nu = curve.nu();
    let n = curve.segments();
    let ks = end_derivative(curve, 1);
    CompatibilityReport {
        tangency: [
            nu[0].dot(cone.inward_normal(Ray::First)).abs(),
            nu[n].dot(cone.inward_normal(Ray::Second)).abs(),
        ],
        ks: [ks.first.abs(), ks.second.abs()],
        on_ray: [
            cone.distance_to_ray(Ray::First, x[0]),
            cone.distance_to_ray(Ray::Second, x[n]),
        ],
        tip_distance: x[0].norm().min(x[n].norm()),
    }
}
