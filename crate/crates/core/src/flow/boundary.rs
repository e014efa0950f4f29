//! Endpoint placement on the rays and the ghost extension across them.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{Cone, DiscreteCurve, GeometryError, Ray, Vec2};

/// Endpoints further than this (times the curve length) from their ray are
/// not projected but rejected.
pub const CAPTURE_DISTANCE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("{ray} endpoint reached the tip region (ray parameter {rho:e})")]
    TipReach { ray: Ray, rho: f64 },
    #[error("{ray} endpoint is {distance:e} away from its ray, beyond capture distance")]
    OutOfReach { ray: Ray, distance: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Projects the endpoints orthogonally onto their rays and rebuilds the
/// curve with ray-aligned end normals. Fails when an endpoint would land
/// closer than `rho_min` to the tip.
pub fn apply_boundary(
    nodes: &[Vec2],
    cone: &Cone,
    rho_min: f64,
) -> Result<DiscreteCurve, BoundaryError> {
    let n = nodes.len().saturating_sub(1);
    let chord: f64 = nodes.windows(2).map(|p| (p[1] - p[0]).norm()).sum();
    let mut out = nodes.to_vec();
    for (ray, j) in [(Ray::First, 0), (Ray::Second, n)] {
        let Some(&p) = nodes.get(j) else { break };
        let rho = cone.ray_parameter(ray, p);
        if !(rho >= rho_min) || rho <= 0.0 {
            return Err(BoundaryError::TipReach { ray, rho });
        }
        let distance = cone.distance_to_ray(ray, p);
        if distance > CAPTURE_DISTANCE * chord {
            return Err(BoundaryError::OutOfReach { ray, distance });
        }
        out[j] = cone.direction(ray) * rho;
    }
    Ok(DiscreteCurve::in_cone(out, cone)?)
}

/// Ghost nodes and ghost curvature values beyond each end.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostExtension {
    /// Mirror images of nodes 1 and N-1 across the first and second ray.
    pub nodes: [Vec2; 2],
    /// Even extension of the curvature: `k_{-1} = k_1`, `k_{N+1} = k_{N-1}`.
    pub k: [f64; 2],
}

pub fn ghost_extension(curve: &DiscreteCurve, cone: &Cone) -> GhostExtension {
    let x = curve.nodes();
    let k = curve.k();
    let n = curve.segments();
    GhostExtension {
        nodes: [cone.reflect(Ray::First, x[1]), cone.reflect(Ray::Second, x[n - 1])],
        k: [k[1], k[n - 1]],
    }
}

/// Curvature table extended by one ghost value at each end.
pub fn extended_curvature(curve: &DiscreteCurve, cone: &Cone) -> Vec<f64> {
    let g = ghost_extension(curve, cone);
    let mut out = Vec::with_capacity(curve.k().len() + 2);
    out.push(g.k[0]);
    out.extend_from_slice(curve.k());
    out.push(g.k[1]);
    out
}
