//! Least-squares fits of decay and blow-up rates.

use alloc::vec::Vec;

use thiserror::Error;

use super::record::QuantityRecord;
use crate::math;

/// Minimum number of usable samples for a decay fit.
pub const MIN_DECAY_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FitError {
    #[error("only {got} usable samples, need {need}")]
    InsufficientData { got: usize, need: usize },
    #[error("abscissae are all equal")]
    Degenerate,
}

/// Straight line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit, FitError> {
    let n = x.len().min(y.len());
    if n < 2 {
        return Err(FitError::InsufficientData { got: n, need: 2 });
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if !(sxx > 0.0) {
        return Err(FitError::Degenerate);
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
        points: n,
    })
}

/// Exponential decay rate `r` in `y ~ C exp(-r t)`. Nonpositive samples are
/// dropped; at least [`MIN_DECAY_POINTS`] must remain.
pub fn decay_fit(series: &[(f64, f64)]) -> Result<f64, FitError> {
    let (t, ly): (Vec<f64>, Vec<f64>) = series
        .iter()
        .filter(|(t, y)| *y > 0.0 && y.is_finite() && t.is_finite())
        .map(|&(t, y)| (t, math::ln(y)))
        .unzip();
    if t.len() < MIN_DECAY_POINTS {
        return Err(FitError::InsufficientData {
            got: t.len(),
            need: MIN_DECAY_POINTS,
        });
    }
    Ok(-fit_line(&t, &ly)?.slope)
}

/// `(t, K_osc / L)` pairs of a trajectory.
pub fn kosc_per_length(records: &[QuantityRecord]) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.t, r.kosc / r.length)).collect()
}

/// Exponent `p` in `int k^2 ds ~ C (T - t)^p` near a blow-up time `T`,
/// fitted on the records whose `int k^2` exceeds `floor`.
pub fn blowup_exponent(records: &[QuantityRecord], t_blowup: f64, floor: f64) -> Result<f64, FitError> {
    let (x, y): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.k2() > floor && t_blowup - r.t > 0.0)
        .map(|r| (math::ln(t_blowup - r.t), math::ln(r.k2())))
        .unzip();
    if x.len() < 5 {
        return Err(FitError::InsufficientData { got: x.len(), need: 5 });
    }
    Ok(fit_line(&x, &y)?.slope)
}
