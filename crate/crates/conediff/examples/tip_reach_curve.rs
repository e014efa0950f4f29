//! Writes the initial curve of `configs/tip_reach.conf`: a long, flat curve
//! in a 179 degree cone with its near end one unit from the tip and its far
//! end 8.4 units out, 0.55 units high in the middle.
//!
//! The curve is the radial graph `1/rho^2 = f(t) / h^2 + e(t)^2` with
//! `t = sin^2(pi x / 2)`, `x` the normalised angle from the first ray,
//! `f(t) = 4 t (1 - t) t / (t + 0.01)` and
//! `e(t) = t^6 / rho_near + (1 - t)^6 / rho_far`. The factor `t / (t + 0.01)`
//! rounds off the far end, which would otherwise turn onto the nearly
//! horizontal ray within a few nodes. Being a function of
//! `cos(pi x)`, it meets both rays at right angles with `k_s = 0`. It is
//! sampled densely and resampled at uniform arclength.
//!
//! `cargo run -p conediff --example tip_reach_curve -- configs/tip_reach_nodes.txt`

use std::f64::consts::PI;

use conediff::snapshot::format_nodes;
use conediff_core::geometry::{Cone, DiscreteCurve, Vec2};

const SEGMENTS: usize = 200;
const FINE: usize = 40_000;
const RHO_NEAR: f64 = 1.0;
const RHO_FAR: f64 = 8.4;
const HEIGHT: f64 = 0.55;
const TAU: f64 = 0.01;

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "tip_reach_nodes.txt".into());
    let cone = Cone::new(179f64.to_radians(), 0.0)?;
    let mut fine = Vec::with_capacity(FINE + 1);
    for i in 0..=FINE {
        let x = i as f64 / FINE as f64;
        let t = (PI * x / 2.0).sin().powi(2);
        let e = t.powi(6) / RHO_NEAR + (1.0 - t).powi(6) / RHO_FAR;
        let flat = 4.0 * t * (1.0 - t) * t / (t + TAU);
        let rho = 1.0 / (flat / (HEIGHT * HEIGHT) + e * e).sqrt();
        let theta = if i == FINE { cone.theta2() } else { cone.theta1() - cone.opening() * x };
        fine.push(Vec2::polar(rho, theta));
    }
    let mut cum = vec![0.0];
    for w in fine.windows(2) {
        cum.push(cum.last().unwrap() + (w[1] - w[0]).norm());
    }
    let total = cum[FINE];
    let mut nodes = vec![fine[0]];
    let mut e = 0;
    for j in 1..SEGMENTS {
        let goal = total * j as f64 / SEGMENTS as f64;
        while cum[e + 1] < goal {
            e += 1;
        }
        let f = (goal - cum[e]) / (cum[e + 1] - cum[e]);
        nodes.push(fine[e] + (fine[e + 1] - fine[e]) * f);
    }
    nodes.push(fine[FINE]);
    let curve = DiscreteCurve::in_cone(nodes, &cone)?;
    let header = format!(
        "# tip-reach initial curve, 179 degree cone, {SEGMENTS} segments\n# generated by crates/conediff/examples/tip_reach_curve.rs\n"
    );
    std::fs::write(&path, header + &format_nodes(curve.nodes()))?;
    println!("wrote {path}: L = {:.6}, spacing ratio {:.4}", curve.length(), curve.spacing_ratio());
    Ok(())
}
