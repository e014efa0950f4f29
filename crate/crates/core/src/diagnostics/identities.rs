//! Residuals of the integral evolution identities between two records.
//!
//! For the flow of order `m` with normal velocity `V = (-1)^(m+1) k_{s^{2m}}`:
//!
//! ```text
//! dL/dt        = -int k_{s^m}^2
//! dA/dt        = 0
//! d kbar/dt    = (2 pi w / L^2) int k_{s^m}^2
//! d int k^2/dt = -2 int k_{s^{m+1}}^2 - int k^3 V
//! d K_osc/dt   = -int k_{s^m}^2 int k^2 + L d int k^2/dt
//! ```
//!
//! For `m = 1` the fourth line is `-2 int k_ss^2 + 3 int k^2 k_s^2`. Each
//! time derivative is a forward difference between the records and each
//! right-hand side the average of its values at the two records.

use core::f64::consts::PI;

use super::record::QuantityRecord;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualRecord {
    pub r_l: f64,
    pub r_a: f64,
    pub r_kbar: f64,
    pub r_k2: f64,
    pub r_kosc: f64,
}

impl ResidualRecord {
    pub fn as_array(&self) -> [f64; 5] {
        [self.r_l, self.r_a, self.r_kbar, self.r_k2, self.r_kosc]
    }

    pub const NAMES: [&'static str; 5] = ["r_L", "r_A", "r_kbar", "r_k2", "r_Kosc"];
}

/// Right-hand sides of the identities at one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityRates {
    pub length: f64,
    pub kbar: f64,
    pub k2: f64,
    pub kosc: f64,
}

pub fn identity_rates(r: &QuantityRecord) -> IdentityRates {
    let m = r.m.max(1) as usize;
    let dissipation = r.norm(m);
    let k2 = if m == 1 {
        -2.0 * r.norm(2) + 3.0 * r.k2_ks2
    } else {
        -2.0 * r.norm(m + 1) - r.k3_v
    };
    IdentityRates {
        length: -dissipation,
        kbar: 2.0 * PI * r.omega / (r.length * r.length) * dissipation,
        k2,
        kosc: -dissipation * r.k2() + r.length * k2,
    }
}

pub fn check_identities(prev: &QuantityRecord, next: &QuantityRecord) -> ResidualRecord {
    let dt = next.t - prev.t;
    if !(dt > 0.0) {
        return ResidualRecord::default();
    }
    let a = identity_rates(prev);
    let b = identity_rates(next);
    let mid = |x: f64, y: f64| 0.5 * (x + y);
    ResidualRecord {
        r_l: ((next.length - prev.length) / dt - mid(a.length, b.length)).abs(),
        r_a: ((next.area - prev.area) / dt).abs(),
        r_kbar: ((next.kbar - prev.kbar) / dt - mid(a.kbar, b.kbar)).abs(),
        r_k2: ((next.k2() - prev.k2()) / dt - mid(a.k2, b.k2)).abs(),
        r_kosc: ((next.kosc - prev.kosc) / dt - mid(a.kosc, b.kosc)).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64) -> QuantityRecord {
        QuantityRecord {
            t,
            length: 2.0,
            area: 1.0,
            kbar: 1.0,
            omega: 0.25,
            kosc: 0.0,
            norms: [2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            m: 1,
            ..Default::default()
        }
    }

    #[test]
    fn stationary_records_have_zero_residuals() {
        let r = check_identities(&rec(0.0), &rec(0.1));
        assert_eq!(r.as_array(), [0.0; 5]);
    }

    #[test]
    fn linear_length_decay_matches() {
        let mut a = rec(0.0);
        let mut b = rec(0.5);
        a.norms[1] = 0.2;
        b.norms[1] = 0.2;
        b.length = a.length - 0.5 * 0.2;
        let r = check_identities(&a, &b);
        assert!(r.r_l < 1e-15);
    }

    #[test]
    fn zero_interval_gives_zero() {
        assert_eq!(check_identities(&rec(1.0), &rec(1.0)), ResidualRecord::default());
    }
}
