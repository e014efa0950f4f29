//! Smallness threshold on the oscillation of curvature and the margin to it.

use core::f64::consts::PI;

use thiserror::Error;

use super::record::QuantityRecord;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("rotation number {0} outside the open interval (0, 1/2)")]
pub struct DomainError(pub f64);

/// Largest initial `K_osc` for which the margin below stays positive:
///
/// ```text
/// (pi/12)^2 [ -24 w + sqrt((24 w)^2 + (48/pi)(1 - 4 w^2)) ]^2
/// ```
///
/// evaluated in the conjugate form `b / (sqrt(a^2 + b) + a)`, which has no
/// cancellation as `w -> 1/2`.
pub fn smallness_threshold(omega: f64) -> Result<f64, DomainError> {
    if !(omega > 0.0 && omega < 0.5) {
        return Err(DomainError(omega));
    }
    Ok(threshold_unchecked(omega))
}

/// Same formula on the closed interval `[0, 1/2]`, giving the limits
/// `pi/3` and `0` at the ends.
pub fn smallness_threshold_closed(omega: f64) -> Result<f64, DomainError> {
    if !(0.0..=0.5).contains(&omega) {
        return Err(DomainError(omega));
    }
    Ok(threshold_unchecked(omega))
}

fn threshold_unchecked(omega: f64) -> f64 {
    let a = 24.0 * omega;
    // 1 - 4w^2 as (1 - 2w)(1 + 2w) keeps relative accuracy near w = 1/2
    let b = (48.0 / PI) * ((1.0 - 2.0 * omega) * (1.0 + 2.0 * omega));
    let root = b / (math::sqrt(a * a + b) + a);
    let c = PI / 12.0;
    c * c * root * root
}

/// Signed margins of the oscillation inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KoscMargin {
    /// `2 - (6/pi) K - 24 w sqrt(K) - 8 w^2`.
    pub inclusive: f64,
    /// The same without the `-8 w^2` term.
    pub reduced: f64,
}

pub fn kosc_margin_of(kosc: f64, omega: f64) -> KoscMargin {
    let reduced = 2.0 - (6.0 / PI) * kosc - 24.0 * omega * math::sqrt(kosc.max(0.0));
    KoscMargin {
        inclusive: reduced - 8.0 * omega * omega,
        reduced,
    }
}

pub fn kosc_margin(record: &QuantityRecord) -> KoscMargin {
    kosc_margin_of(record.kosc, record.omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quarter_value() {
        let v = smallness_threshold(0.25).unwrap();
        assert!((v - 0.054_175_132_037_881_646).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        assert!((smallness_threshold_closed(0.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert_eq!(smallness_threshold_closed(0.5).unwrap(), 0.0);
        assert!(smallness_threshold(0.0).is_err());
        assert!(smallness_threshold(0.5).is_err());
        assert!(smallness_threshold(f64::NAN).is_err());
        assert!(smallness_threshold_closed(0.6).is_err());
    }

    #[test]
    fn margin_examples() {
        assert!((kosc_margin_of(0.0, 0.25).inclusive - 1.5).abs() < 1e-15);
        assert!((kosc_margin_of(0.0, 0.25).reduced - 2.0).abs() < 1e-15);
        let k = smallness_threshold(0.25).unwrap();
        assert!(kosc_margin_of(k, 0.25).inclusive.abs() < 1e-14);
        assert!(kosc_margin_of(k * 1.01, 0.25).inclusive < 0.0);
    }

    fn bisect_root(omega: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if kosc_margin_of(mid, omega).inclusive > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    proptest! {
        #[test]
        fn threshold_is_the_margin_root(omega in 1e-4f64..0.4999) {
            let t = smallness_threshold(omega).unwrap();
            let b = bisect_root(omega);
            prop_assert!((t - b).abs() <= 1e-12 * t.max(1e-300) + 1e-300);
        }

        #[test]
        fn threshold_decreasing(w1 in 1e-6f64..0.4999, w2 in 1e-6f64..0.4999) {
            prop_assume!(w2 - w1 > 1e-9);
            prop_assert!(smallness_threshold(w1).unwrap() > smallness_threshold(w2).unwrap());
        }
    }
}
