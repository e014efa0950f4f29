//! Discrete Poincare-Sobolev-Wirtinger inequalities on `[0, L]`.

use core::f64::consts::PI;

use thiserror::Error;

/// Relative tolerance on the hypotheses (mean or endpoint values against
/// the sup norm).
pub const HYPOTHESIS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PswVariant {
    /// `int g^2 <= (L^2/pi^2) int g'^2` for mean-zero `g`.
    MeanZero,
    /// `int g^2 <= (L^2/pi^2) int g'^2` for `g(0) = g(L) = 0`.
    EndpointsZero,
    /// `|g|_inf^2 <= (2L/pi) int g'^2` for mean-zero `g`.
    SupMeanZero,
    /// `|g|_inf^2 <= (L/pi) int g'^2` for `g(0) = g(L) = 0`.
    SupEndpointsZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PswError {
    #[error("samples need at least two points on an increasing grid")]
    BadGrid,
    #[error("mean is {mean:e}, not zero")]
    NonzeroMean { mean: f64 },
    #[error("endpoint values {first:e}, {last:e} are not zero")]
    NonzeroEndpoints { first: f64, last: f64 },
    #[error("derivative vanishes identically")]
    Degenerate,
}

/// Ratio of left to right side of the chosen inequality for samples `g`
/// at increasing abscissae `s`. Integrals of `g^2` use the trapezoidal
/// rule, integrals of `g'^2` the edge differences.
pub fn check_psw(s: &[f64], g: &[f64], variant: PswVariant) -> Result<f64, PswError> {
    let n = s.len();
    if n < 2 || g.len() != n || s.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(PswError::BadGrid);
    }
    let len = s[n - 1] - s[0];
    let sup = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut int_g = 0.0;
    let mut int_g2 = 0.0;
    let mut int_dg2 = 0.0;
    for i in 0..n - 1 {
        let h = s[i + 1] - s[i];
        int_g += 0.5 * h * (g[i] + g[i + 1]);
        int_g2 += 0.5 * h * (g[i] * g[i] + g[i + 1] * g[i + 1]);
        let d = g[i + 1] - g[i];
        int_dg2 += d * d / h;
    }
    match variant {
        PswVariant::MeanZero | PswVariant::SupMeanZero => {
            let mean = int_g / len;
            if mean.abs() > HYPOTHESIS_TOL * sup {
                return Err(PswError::NonzeroMean { mean });
            }
        }
        PswVariant::EndpointsZero | PswVariant::SupEndpointsZero => {
            let (first, last) = (g[0], g[n - 1]);
            if first.abs().max(last.abs()) > HYPOTHESIS_TOL * sup {
                return Err(PswError::NonzeroEndpoints { first, last });
            }
        }
    }
    if !(int_dg2 > 0.0) {
        return Err(PswError::Degenerate);
    }
    let ratio = match variant {
        PswVariant::MeanZero | PswVariant::EndpointsZero => int_g2 / (len * len / (PI * PI) * int_dg2),
        PswVariant::SupMeanZero => sup * sup / (2.0 * len / PI * int_dg2),
        PswVariant::SupEndpointsZero => sup * sup / (len / PI * int_dg2),
    };
    Ok(ratio)
}
