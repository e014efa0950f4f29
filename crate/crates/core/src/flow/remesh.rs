//! Redistribution of nodes to uniform chord length.

use alloc::vec::Vec;

use crate::geometry::{polygon_area, DiscreteCurve, GeometryError, Vec2};
use crate::math;

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone)]
pub struct Pchip {
    t: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    /// `t` strictly increasing, at least two knots.
    pub fn new(t: &[f64], y: &[f64]) -> Self {
        let n = t.len();
        assert!(n >= 2 && y.len() == n);
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = alloc::vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Pchip {
            t: t.to_vec(),
            y: y.to_vec(),
            d,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        let i = match self.t.partition_point(|&ti| ti <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.t[i + 1] - self.t[i];
        let u = (x - self.t[i]) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

// Three-point end slope, limited to keep monotonicity.
fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d * del0 <= 0.0 {
        0.0
    } else if del0 * del1 <= 0.0 && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

const MAX_SWEEPS: usize = 50;

/// Resamples the curve at uniform chord length along a monotone cubic
/// through the current nodes, keeps both endpoints, and restores the
/// enclosed area by a uniform normal offset of the interior nodes. The offset
/// disturbs the spacing slightly, so resampling and offset alternate until
/// the chords are uniform to round-off.
pub fn remesh(curve: &DiscreteCurve) -> Result<DiscreteCurve, GeometryError> {
    let target = polygon_area(curve.nodes());
    let mut current = curve.clone();
    for _ in 0..MAX_ROUNDS {
        let fresh = current.with_nodes(equalize(&current))?;
        current = restore_area(&fresh, target)?;
        if current.spacing_ratio() - 1.0 < UNIFORM_TOL {
            break;
        }
    }
    Ok(current)
}

const MAX_ROUNDS: usize = 8;
const UNIFORM_TOL: f64 = 1e-12;

// Nodes at uniform chord length on the monotone cubic through `curve`.
fn equalize(curve: &DiscreteCurve) -> Vec<Vec2> {
    let n = curve.segments();
    let s = curve.s();
    let xs: Vec<f64> = curve.nodes().iter().map(|p| p.x).collect();
    let ys: Vec<f64> = curve.nodes().iter().map(|p| p.y).collect();
    let px = Pchip::new(s, &xs);
    let py = Pchip::new(s, &ys);
    let at = |t: f64| Vec2::new(px.eval(t), py.eval(t));

    let total = curve.length();
    let mut params: Vec<f64> = (0..=n).map(|i| total * i as f64 / n as f64).collect();
    params[n] = total;
    let mut pts: Vec<Vec2> = params.iter().map(|&t| at(t)).collect();
    pts[0] = curve.nodes()[0];
    pts[n] = curve.nodes()[n];

    // Move each parameter to where the cumulative chord hits its uniform
    // target, on the fixed spline.
    for _ in 0..MAX_SWEEPS {
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for w in pts.windows(2) {
            let last = *cum.last().unwrap();
            cum.push(last + (w[1] - w[0]).norm());
        }
        let target_step = cum[n] / n as f64;
        let spread = pts
            .windows(2)
            .map(|w| ((w[1] - w[0]).norm() / target_step - 1.0).abs())
            .fold(0.0f64, f64::max);
        if spread < 1e-13 {
            break;
        }
        let mut next = params.clone();
        let mut e = 0;
        for (i, slot) in next.iter_mut().enumerate().take(n).skip(1) {
            let goal = target_step * i as f64;
            while cum[e + 1] < goal {
                e += 1;
            }
            let frac = (goal - cum[e]) / (cum[e + 1] - cum[e]);
            *slot = params[e] + frac * (params[e + 1] - params[e]);
        }
        params = next;
        for i in 1..n {
            pts[i] = at(params[i]);
        }
    }
    pts
}

/// Offsets interior nodes by a common distance along their normals so the
/// polygon area equals `target`.
pub fn restore_area(curve: &DiscreteCurve, target: f64) -> Result<DiscreteCurve, GeometryError> {
    let n = curve.segments();
    let x = curve.nodes();
    let nu = curve.motion_normals();
    let mut dir = alloc::vec![Vec2::ZERO; n + 1];
    dir[1..n].copy_from_slice(&nu[1..n]);
    // A(x + c d) = A0 + c A1 + c^2 A2 with the same midpoint-edge formula.
    let a0 = polygon_area(x);
    let mut a1 = 0.0;
    let mut a2 = 0.0;
    for e in 0..n {
        let (p, q) = (x[e], x[e + 1]);
        let (u, v) = (dir[e], dir[e + 1]);
        // -1/2 cross(p + c u, q + c v)
        a1 += -0.5 * (p.cross(v) + u.cross(q));
        a2 += -0.5 * u.cross(v);
    }
    let rhs = a0 - target;
    if rhs == 0.0 {
        return Ok(curve.clone());
    }
    // Root of a2 c^2 + a1 c + rhs = 0 closest to zero, in cancellation-free form.
    let disc = a1 * a1 - 4.0 * a2 * rhs;
    let c = if disc >= 0.0 && a1 != 0.0 {
        let q = -0.5 * (a1 + a1.signum() * math::sqrt(disc));
        rhs / q
    } else {
        -rhs / a1
    };
    if !c.is_finite() || c == 0.0 {
        return Ok(curve.clone());
    }
    let nodes = x.iter().zip(&dir).map(|(&p, &d)| p + d * c).collect();
    curve.with_nodes(nodes)
}
