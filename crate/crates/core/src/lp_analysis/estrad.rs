use rayon::prelude::*;

use super::fit::{fit_all, RateFit};
use super::norms::lp_norm_radial;
use crate::error::{domain, Result};

/// Position of p relative to p₁ = 2d/(d−1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstradRegime {
    Above,
    At,
    Below,
}

/// Predicted growth of ‖ψₙ‖_{Lᵖ(ℝ^d)} in n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstradPrediction {
    pub d: usize,
    pub p: f64,
    pub regime: EstradRegime,
    pub exponent: f64,
    /// True at p = p₁, where the bound carries an extra ln^{1/p} n.
    pub log_correction: bool,
}

impl EstradPrediction {
    /// n^{exponent}·(ln n)^{1/p if log_correction}.
    pub fn predicted(&self, n: f64) -> f64 {
        let base = n.powf(self.exponent);
        if self.log_correction {
            base * n.ln().powf(1.0 / self.p)
        } else {
            base
        }
    }
}

/// p₁ = 2d/(d−1).
pub fn critical_p(d: usize) -> f64 {
    2.0 * d as f64 / (d as f64 - 1.0)
}

pub fn estrad_prediction(d: usize, p: f64) -> Result<EstradPrediction> {
    if d < 2 {
        return domain(format!("radial prediction needs d >= 2, got {d}"));
    }
    if !(p >= 2.0) {
        return domain(format!("prediction needs p >= 2, got {p}"));
    }
    let p1 = critical_p(d);
    let half_d = d as f64 / 2.0;
    let inv = 1.0 / p;
    let (regime, exponent) = if (p - p1).abs() <= 1e-12 * p1 {
        (EstradRegime::At, -0.25)
    } else if p > p1 {
        (EstradRegime::Above, half_d * (0.5 - inv) - 0.5)
    } else {
        (EstradRegime::Below, -half_d * (0.5 - inv))
    };
    Ok(EstradPrediction {
        d,
        p,
        regime,
        exponent,
        log_correction: regime == EstradRegime::At,
    })
}

/// Measured norms over an n-sweep together with the fitted rate.
#[derive(Clone, Debug, PartialEq)]
pub struct LpRateReport {
    pub prediction: EstradPrediction,
    /// (n, ‖ψₙ‖_p).
    pub norms: Vec<(f64, f64)>,
    /// Fit of the norms with the log factor divided out when present.
    pub fit: RateFit,
    /// max/min of ‖ψₙ‖_p / predicted(n) over the sweep.
    pub band_ratio: f64,
}

impl LpRateReport {
    /// |slope − exponent|.
    pub fn slope_gap(&self) -> f64 {
        (self.fit.slope - self.prediction.exponent).abs()
    }
}

pub fn lp_rate_sweep(d: usize, p: f64, n_list: &[usize]) -> Result<LpRateReport> {
    let prediction = estrad_prediction(d, p)?;
    let norms: Vec<(f64, f64)> = n_list
        .par_iter()
        .map(|&n| lp_norm_radial(n, d, p).map(|v| (n as f64, v)))
        .collect::<Result<_>>()?;
    let adjusted: Vec<(f64, f64)> = norms
        .iter()
        .map(|&(n, v)| {
            if prediction.log_correction {
                (n, v / n.ln().powf(1.0 / p))
            } else {
                (n, v)
            }
        })
        .collect();
    let fit = fit_all(&adjusted)?;
    let ratios: Vec<f64> = norms.iter().map(|&(n, v)| v / prediction.predicted(n)).collect();
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LpRateReport {
        prediction,
        norms,
        fit,
        band_ratio: hi / lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        let p = estrad_prediction(3, f64::INFINITY).unwrap();
        assert_eq!(p.regime, EstradRegime::Above);
        assert!((p.exponent - 0.25).abs() < 1e-15);
        let p = estrad_prediction(3, 3.0).unwrap();
        assert_eq!(p.regime, EstradRegime::At);
        assert!(p.log_correction);
        let p = estrad_prediction(4, 2.0).unwrap();
        assert_eq!(p.regime, EstradRegime::Below);
        assert_eq!(p.exponent, 0.0);
    }

    #[test]
    fn invalid() {
        assert!(estrad_prediction(1, 4.0).is_err());
        assert!(estrad_prediction(3, 1.5).is_err());
    }
}
