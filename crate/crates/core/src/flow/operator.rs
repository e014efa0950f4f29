//! Arclength Laplacian with zero boundary flux and the normal velocity.
//!
//! `(L u)_j = (F_{j+1/2} - F_{j-1/2}) / c_j` with edge fluxes
//! `F_e = (u_{e+1} - u_e) / h_e` and `F = 0` beyond the ends. The zero end
//! flux is the even ghost extension of `u` across each ray, so every odd
//! derivative of the extended table vanishes at the ends.

use alloc::vec::Vec;

use crate::banded::BandMatrix;
use crate::geometry::DiscreteCurve;

/// `(-1)^(m+1)`.
pub fn flow_sign(m: u32) -> f64 {
    if m % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Edge differences `(u_{e+1} - u_e) / h_e`.
pub fn edge_gradient(h: &[f64], u: &[f64]) -> Vec<f64> {
    debug_assert_eq!(u.len(), h.len() + 1);
    u.windows(2).zip(h).map(|(p, h)| (p[1] - p[0]) / h).collect()
}

/// Applies the Laplacian with cell lengths `c`.
pub fn laplacian(h: &[f64], c: &[f64], u: &[f64]) -> Vec<f64> {
    let n = h.len();
    let f = edge_gradient(h, u);
    (0..=n)
        .map(|j| {
            let right = if j < n { f[j] } else { 0.0 };
            let left = if j > 0 { f[j - 1] } else { 0.0 };
            (right - left) / c[j]
        })
        .collect()
}

/// The Laplacian as a tridiagonal matrix.
pub fn laplacian_matrix(h: &[f64], c: &[f64]) -> BandMatrix {
    let n = h.len();
    let mut m = BandMatrix::zeros(n + 1, 1, 1);
    for (e, &he) in h.iter().enumerate() {
        // flux through edge e enters row e with + and row e+1 with -
        let g = 1.0 / he;
        m.add(e, e, -g / c[e]);
        m.add(e, e + 1, g / c[e]);
        m.add(e + 1, e + 1, -g / c[e + 1]);
        m.add(e + 1, e, g / c[e + 1]);
    }
    m
}

/// `p`-fold Laplacian of `u` on the curve's area-dual cells.
pub fn laplacian_power(curve: &DiscreteCurve, u: &[f64], p: u32) -> Vec<f64> {
    let mut out = u.to_vec();
    for _ in 0..p {
        out = laplacian(curve.edge_lengths(), curve.dual_lengths(), &out);
    }
    out
}

/// `(-1)^(m+1) k_{s^{2m}}` at each node.
pub fn normal_velocity(curve: &DiscreteCurve, m: u32) -> Vec<f64> {
    normal_velocity_of(curve, curve.k(), m)
}

/// Normal velocity computed from an arbitrary nodal curvature table.
pub fn normal_velocity_of(curve: &DiscreteCurve, k: &[f64], m: u32) -> Vec<f64> {
    let s = flow_sign(m);
    laplacian_power(curve, k, m)
        .into_iter()
        .map(|v| s * v)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_arc, ArcSpec, Cone, Vec2};
    use crate::math;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn straight(n: usize) -> DiscreteCurve {
        let nodes = (0..=n).map(|i| Vec2::new(1.0 + i as f64 / n as f64, 0.0)).collect();
        DiscreteCurve::new(nodes).unwrap()
    }

    #[test]
    fn arc_velocity_vanishes() {
        let cone = Cone::new(FRAC_PI_2, 0.0).unwrap();
        let c = make_arc(&ArcSpec::with_radius(cone, 1.0).unwrap(), 200).unwrap();
        // round-off in the nodes is amplified by ds^-(2m+2)
        let ds = c.mean_spacing();
        for m in 1..=2 {
            let v = normal_velocity(&c, m);
            let floor = 1e-14 * math::powi(ds, -(2 * m as i32 + 2));
            assert!(v.iter().all(|v| v.abs() < floor), "m = {m}");
        }
    }

    #[test]
    fn second_derivative_of_cosine() {
        for n in [50usize, 100, 200] {
            let c = straight(n);
            let l = c.length();
            let table: Vec<f64> = c.s().iter().map(|&s| math::cos(PI * s / l)).collect();
            let v = normal_velocity_of(&c, &table, 1);
            let ds = l / n as f64;
            for (j, &s) in c.s().iter().enumerate() {
                let want = -(PI / l) * (PI / l) * math::cos(PI * s / l);
                assert!((v[j] - want).abs() < ds * ds * 10.0, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn fourth_derivative_of_cosine_with_sign() {
        let n = 200;
        let c = straight(n);
        let l = c.length();
        let table: Vec<f64> = c.s().iter().map(|&s| math::cos(PI * s / l)).collect();
        let v = normal_velocity_of(&c, &table, 2);
        let ds = l / n as f64;
        let q = PI / l;
        for (j, &s) in c.s().iter().enumerate() {
            // k_ssss = q^4 cos, velocity is -k_ssss
            let want = -q * q * q * q * math::cos(q * s);
            assert!((v[j] - want).abs() < 10.0 * q * q * q * q * ds * ds, "j={j}: {} vs {want}", v[j]);
        }
    }

    #[test]
    fn matrix_matches_apply() {
        let h = [0.3, 0.5, 0.2, 0.4];
        let c = [0.15, 0.4, 0.35, 0.3, 0.2];
        let u = [1.0, -2.0, 0.5, 3.0, 0.1];
        let a = laplacian_matrix(&h, &c).mul_vec(&u);
        let b = laplacian(&h, &c, &u);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn weighted_sum_telescopes() {
        let h = [0.3, 0.5, 0.2, 0.4];
        let c = [0.15, 0.4, 0.35, 0.3, 0.2];
        let u = [1.0, -2.0, 0.5, 3.0, 0.1];
        let lu = laplacian(&h, &c, &u);
        let total: f64 = lu.iter().zip(&c).map(|(l, c)| l * c).sum();
        assert!(total.abs() < 1e-13);
    }
}
