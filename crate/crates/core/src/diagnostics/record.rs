//! Per-time scalar summary of a curve state.

use core::f64::consts::PI;

use crate::flow::operator::{edge_gradient, laplacian_power, normal_velocity};
use crate::geometry::{
    average_curvature, oscillation_of_curvature, polygon_area, rotation_number, Cone,
    DiscreteCurve, Ray,
};

use super::boundary::{end_derivative, EndDerivative};

/// Highest derivative order whose squared norm is stored.
pub const MAX_ORDER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuantityRecord {
    pub t: f64,
    pub length: f64,
    pub area: f64,
    pub kbar: f64,
    pub omega: f64,
    pub kosc: f64,
    /// `norms[i]` is the squared L2 norm of the i-th arclength derivative of
    /// curvature.
    pub norms: [f64; MAX_ORDER + 1],
    /// `int k^2 k_s^2 ds`.
    pub k2_ks2: f64,
    /// `int k^3 V ds` with `V` the normal velocity.
    pub k3_v: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub dt: f64,
    pub m: u32,
    /// `max |k - kbar|`.
    pub max_dev: f64,
    /// `max |V|`.
    pub max_v: f64,
    /// One-sided `|k_s|` at the first and second end.
    pub end_ks: [f64; 2],
    /// One-sided `|k_sss|` at the first and second end.
    pub end_ksss: [f64; 2],
    /// Mean chord length.
    pub ds: f64,
}

impl QuantityRecord {
    /// `int k^2 ds`.
    pub fn k2(&self) -> f64 {
        self.norms[0]
    }

    /// `int (d^i k / ds^i)^2 ds`.
    pub fn norm(&self, order: usize) -> f64 {
        self.norms[order]
    }

    pub fn min_rho(&self) -> f64 {
        self.rho_minus.min(self.rho_plus)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.length,
            self.area,
            self.kbar,
            self.omega,
            self.kosc,
            self.k2_ks2,
            self.k3_v,
            self.rho_minus,
            self.rho_plus,
            self.dt,
        ]
        .iter()
        .chain(self.norms.iter())
        .all(|v| v.is_finite())
    }
}

/// Squared L2 norms of `d^i k / ds^i` for `i = 0..=MAX_ORDER`. Even orders are
/// nodal (iterated Laplacian, trapezoidal quadrature); odd orders are edge
/// differences of the preceding even order.
pub fn derivative_norms(curve: &DiscreteCurve) -> [f64; MAX_ORDER + 1] {
    derivative_norms_of(curve, curve.k())
}

/// [`derivative_norms`] for an arbitrary nodal table.
pub fn derivative_norms_of(curve: &DiscreteCurve, table: &[f64]) -> [f64; MAX_ORDER + 1] {
    let h = curve.edge_lengths();
    let mut out = [0.0; MAX_ORDER + 1];
    let mut even = table.to_vec();
    for p in 0..=MAX_ORDER / 2 {
        if p > 0 {
            even = laplacian_power(curve, &even, 1);
        }
        let sq: alloc::vec::Vec<f64> = even.iter().map(|v| v * v).collect();
        out[2 * p] = curve.integrate(&sq);
        if 2 * p + 1 <= MAX_ORDER {
            out[2 * p + 1] = edge_gradient(h, &even)
                .iter()
                .zip(h)
                .map(|(g, h)| g * g * h)
                .sum();
        }
    }
    out
}

/// Measures all scalars of a curve lying in `cone`.
pub fn measure(curve: &DiscreteCurve, cone: &Cone, m: u32, t: f64, dt: f64) -> QuantityRecord {
    let k = curve.k();
    let h = curve.edge_lengths();
    let n = curve.segments();
    let kbar = average_curvature(curve);
    let v = normal_velocity(curve, m);
    let ks = edge_gradient(h, k);
    let k2_ks2 = ks
        .iter()
        .enumerate()
        .map(|(e, g)| 0.5 * (k[e] * k[e] + k[e + 1] * k[e + 1]) * g * g * h[e])
        .sum();
    let k3v: alloc::vec::Vec<f64> = k.iter().zip(&v).map(|(k, v)| k * k * k * v).collect();
    let d1 = end_derivative(curve, 1);
    let d3 = end_derivative(curve, 3);
    let x = curve.nodes();
    QuantityRecord {
        t,
        length: curve.length(),
        area: polygon_area(x),
        kbar,
        omega: rotation_number(curve),
        kosc: oscillation_of_curvature(curve),
        norms: derivative_norms(curve),
        k2_ks2,
        k3_v: curve.integrate(&k3v),
        rho_minus: cone.ray_parameter(Ray::First, x[0]),
        rho_plus: cone.ray_parameter(Ray::Second, x[n]),
        dt,
        m,
        max_dev: k.iter().fold(0.0f64, |a, k| a.max((k - kbar).abs())),
        max_v: v.iter().fold(0.0f64, |a, v| a.max(v.abs())),
        end_ks: abs_pair(d1),
        end_ksss: abs_pair(d3),
        ds: curve.mean_spacing(),
    }
}

fn abs_pair(d: EndDerivative) -> [f64; 2] {
    [d.first.abs(), d.second.abs()]
}

/// `2 pi omega / L`, the average curvature every curve of this length and
/// rotation number has.
pub fn kbar_from_omega(omega: f64, length: f64) -> f64 {
    2.0 * PI * omega / length
}
