//! One-sided derivatives at the ends and distance to the limiting arc.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{Cone, DiscreteCurve, Vec2};
use crate::math;

/// Finite-difference weights for the `order`-th derivative at `z` from
/// samples at `x` (Fornberg's recursion, arbitrary spacing).
pub fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<f64> {
    let n = x.len();
    assert!(n > order, "need more points than the derivative order");
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Signed one-sided derivative of curvature at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndDerivative {
    pub first: f64,
    pub second: f64,
}

/// Second-order accurate one-sided `d^order k / ds^order` at both ends
/// (`order + 2` points on each side).
pub fn end_derivative(curve: &DiscreteCurve, order: usize) -> EndDerivative {
    end_derivative_of(curve, curve.k(), order)
}

pub fn end_derivative_of(curve: &DiscreteCurve, table: &[f64], order: usize) -> EndDerivative {
    let s = curve.s();
    let n = curve.segments();
    let p = (order + 2).min(n + 1);
    let w = fd_weights(s[0], &s[..p], order);
    let first = w.iter().zip(&table[..p]).map(|(w, v)| w * v).sum();
    let tail: Vec<f64> = (0..p).map(|i| s[n - i]).collect();
    let w = fd_weights(s[n], &tail, order);
    let second = w.iter().enumerate().map(|(i, w)| w * table[n - i]).sum();
    EndDerivative { first, second }
}

fn distance_to_arc(p: Vec2, cone: &Cone, radius: f64) -> f64 {
    let theta = p.angle();
    if theta <= cone.theta1() && theta >= cone.theta2() {
        (p.norm() - radius).abs()
    } else {
        let a = Vec2::polar(radius, cone.theta1());
        let b = Vec2::polar(radius, cone.theta2());
        (p - a).norm().min((p - b).norm())
    }
}

fn distance_to_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let t = ((p - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Hausdorff distance between the polygon and the tip-centred arc of the
/// given radius spanning the cone.
pub fn hausdorff_to_arc(curve: &DiscreteCurve, cone: &Cone, radius: f64) -> f64 {
    let x = curve.nodes();
    // polygon -> arc: vertices and the point of each edge nearest the tip
    let mut worst = 0.0f64;
    for e in x.windows(2) {
        worst = worst.max(distance_to_arc(e[0], cone, radius));
        let d = e[1] - e[0];
        let t = (-e[0].dot(d) / d.dot(d)).clamp(0.0, 1.0);
        worst = worst.max(distance_to_arc(e[0] + d * t, cone, radius));
    }
    worst = worst.max(distance_to_arc(x[x.len() - 1], cone, radius));

    // arc -> polygon: dense sampling of the arc
    let samples = 16 * curve.segments();
    for i in 0..=samples {
        let theta = cone.theta1() - cone.opening() * i as f64 / samples as f64;
        let q = Vec2::polar(radius, theta);
        let d = x
            .windows(2)
            .map(|e| distance_to_segment(q, e[0], e[1]))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    worst
}

/// Radius of the tip-centred arc enclosing `area` in `cone`.
pub fn arc_radius_for_area(cone: &Cone, area: f64) -> f64 {
    math::sqrt(2.0 * area / cone.opening())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_arc, ArcSpec};
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn weights_on_uniform_grid() {
        let w = fd_weights(0.0, &[0.0, 1.0, 2.0], 1);
        for (g, e) in w.iter().zip([-1.5, 2.0, -0.5]) {
            assert!((g - e).abs() < 1e-14);
        }
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        for (g, e) in w.iter().zip([1.0, -2.0, 1.0]) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_exact_for_polynomials() {
        let x = [0.0, 0.13, 0.29, 0.41, 0.6];
        let w = fd_weights(0.0, &x, 3);
        // third derivative of t^3 is 6, of lower powers 0
        let cubic: f64 = w.iter().zip(&x).map(|(w, t)| w * t * t * t).sum();
        assert!((cubic - 6.0).abs() < 1e-9);
        let quad: f64 = w.iter().zip(&x).map(|(w, t)| w * t * t).sum();
        assert!(quad.abs() < 1e-9);
    }

    #[test]
    fn arc_end_derivatives_vanish() {
        let cone = Cone::new(FRAC_PI_2, 0.0).unwrap();
        let c = make_arc(&ArcSpec::with_radius(cone, 1.0).unwrap(), 100).unwrap();
        let d = end_derivative(&c, 1);
        assert!(d.first.abs() < 1e-9 && d.second.abs() < 1e-9);
    }

    #[test]
    fn hausdorff_of_arc_is_sagitta() {
        let cone = Cone::new(FRAC_PI_2, 0.0).unwrap();
        let n = 50;
        let c = make_arc(&ArcSpec::with_radius(cone, 1.0).unwrap(), n).unwrap();
        let half = cone.opening() / (2.0 * n as f64);
        let sagitta = 1.0 - math::cos(half);
        let d = hausdorff_to_arc(&c, &cone, 1.0);
        assert!((d - sagitta).abs() < 1e-3 * sagitta, "{d} vs {sagitta}");
        let d = hausdorff_to_arc(&c, &cone, 1.1);
        assert!((d - 0.1 - sagitta).abs() < 1e-9);
    }
}
