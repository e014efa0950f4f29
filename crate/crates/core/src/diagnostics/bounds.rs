//! A-priori bounds along a trajectory started below the smallness threshold.
//!
//! With `K0 = K_osc(0)`, `L0 = L(0)` and `d` the inclusive margin at `t = 0`:
//!
//! ```text
//! (a) int k^2 ds    <= (K0 + 4 pi^2 w^2) / L(t)
//! (b) K_osc / L     <= (K0 / L0) exp(-d pi^4 t / L0^4)
//! (c) L(t)^3        <= L0^3 [1 + (3 K0 / (d pi^2)) (exp(-d pi^4 t / L0^4) - 1)]
//! ```

use core::f64::consts::PI;

use super::record::QuantityRecord;
use super::threshold::{kosc_margin, smallness_threshold};
use crate::math;

/// Default relative slack.
pub const BOUNDS_TOL: f64 = 1e-2;

/// Absolute slack on K_osc. An exact arc measures about 1e-24, so (b) would
/// otherwise compare round-off against a decaying exponential.
pub const KOSC_FLOOR: f64 = 1e-16;

const PI4: f64 = PI * PI * PI * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Smallest `(rhs - lhs) / |rhs|` seen; negative means violated.
    pub worst_margin: f64,
    pub t_worst: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    /// True when the initial data is not below the threshold, so the checks
    /// are evaluated but carry no claim.
    pub informational: bool,
    /// Inclusive margin at `t = 0`.
    pub delta: f64,
    /// Guaranteed decay rate `d pi^4 / L0^4`.
    pub rate_floor: f64,
    pub checks: [BoundCheck; 3],
}

impl BoundsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Right-hand sides of (a), (b), (c) at time `t`.
pub fn bound_values(initial: &QuantityRecord, delta: f64, t: f64, length: f64) -> [f64; 3] {
    let l0 = initial.length;
    let k0 = initial.kosc;
    let w = initial.omega;
    let decay = math::exp(-delta * PI4 * t / (l0 * l0 * l0 * l0));
    [
        (k0 + 4.0 * PI * PI * w * w) / length,
        k0 / l0 * decay,
        l0 * l0 * l0 * (1.0 + 3.0 * k0 / (delta * PI * PI) * (decay - 1.0)),
    ]
}

/// Checks (a)-(c) at every record with relative slack `tol`: a record passes
/// when `lhs <= rhs + tol |rhs|`, plus [`KOSC_FLOOR`]` / L` for (b).
pub fn check_bounds(records: &[QuantityRecord], initial: &QuantityRecord, tol: f64) -> BoundsReport {
    let delta = kosc_margin(initial).inclusive;
    let below = smallness_threshold(initial.omega)
        .map(|th| initial.kosc < th)
        .unwrap_or(false);
    let l0 = initial.length;
    let mut checks = [
        BoundCheck { name: "k2_bound", passed: true, worst_margin: f64::INFINITY, t_worst: initial.t },
        BoundCheck { name: "kosc_decay", passed: true, worst_margin: f64::INFINITY, t_worst: initial.t },
        BoundCheck { name: "length_cubed", passed: true, worst_margin: f64::INFINITY, t_worst: initial.t },
    ];
    for r in records {
        let t = r.t - initial.t;
        let rhs = bound_values(initial, delta, t, r.length);
        let lhs = [r.k2(), r.kosc / r.length, r.length * r.length * r.length];
        for i in 0..3 {
            let scale = rhs[i].abs();
            let margin = if scale > 0.0 {
                (rhs[i] - lhs[i]) / scale
            } else if lhs[i] <= 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            let floor = if i == 1 { KOSC_FLOOR / r.length } else { 0.0 };
            let ok = lhs[i] <= rhs[i] + tol * scale + floor;
            let c = &mut checks[i];
            c.passed &= ok;
            if margin < c.worst_margin {
                c.worst_margin = margin;
                c.t_worst = r.t;
            }
        }
    }
    BoundsReport {
        informational: !below || !(delta > 0.0),
        delta,
        rate_floor: delta * PI4 / (l0 * l0 * l0 * l0),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn arc_record(t: f64) -> QuantityRecord {
        let l = PI / 2.0;
        QuantityRecord {
            t,
            length: l,
            area: PI / 4.0,
            kbar: 1.0,
            omega: 0.25,
            kosc: 0.0,
            norms: [l, 0.0, 0.0, 0.0, 0.0, 0.0],
            m: 1,
            ..Default::default()
        }
    }

    #[test]
    fn stationary_arc_passes() {
        let recs: Vec<QuantityRecord> = (0..10).map(|i| arc_record(i as f64 * 0.1)).collect();
        let rep = check_bounds(&recs, &recs[0], BOUNDS_TOL);
        assert!(rep.all_passed());
        assert!(!rep.informational);
        assert!((rep.delta - 1.5).abs() < 1e-15);
    }

    #[test]
    fn growing_kosc_is_flagged() {
        let mut recs: Vec<QuantityRecord> = (0..10).map(|i| arc_record(i as f64 * 0.1)).collect();
        recs[0].kosc = 0.01;
        for (i, r) in recs.iter_mut().enumerate().skip(1) {
            r.kosc = 0.01 * (1.0 + 0.5 * i as f64);
        }
        let init = recs[0];
        let rep = check_bounds(&recs, &init, BOUNDS_TOL);
        assert!(!rep.checks[1].passed);
        assert!(rep.checks[1].worst_margin < 0.0);
    }

    #[test]
    fn above_threshold_is_informational() {
        let mut r = arc_record(0.0);
        r.kosc = 0.2;
        let rep = check_bounds(&[r], &r, BOUNDS_TOL);
        assert!(rep.informational);
    }
}
