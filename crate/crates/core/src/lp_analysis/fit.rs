use crate::error::{Error, Result};
use crate::stats::ols;

/// Least-squares fit of ln v against ln n.
#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    /// (ln n, ln v) pairs actually fitted.
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

impl RateFit {
    /// Fitted v at n.
    pub fn predict(&self, n: f64) -> f64 {
        (self.intercept + self.slope * n.ln()).exp()
    }
}

/// OLS on (ln n, ln v) for the points with n in `window` (inclusive).
pub fn fit_rate(values: &[(f64, f64)], window: (f64, f64)) -> Result<RateFit> {
    let inside: Vec<(f64, f64)> = values
        .iter()
        .copied()
        .filter(|&(n, _)| n >= window.0 && n <= window.1)
        .collect();
    if inside.len() < 5 {
        return Err(Error::Degenerate(format!(
            "rate fit needs at least 5 points, got {}",
            inside.len()
        )));
    }
    if let Some(&(n, v)) = inside.iter().find(|p| !(p.1 > 0.0) || !(p.0 > 0.0)) {
        return Err(Error::Domain(format!("rate fit needs positive data, got ({n}, {v})")));
    }
    let pairs: Vec<(f64, f64)> = inside.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (slope, intercept, r_squared) =
        ols(&x, &y).ok_or_else(|| Error::Degenerate("all abscissae are equal".into()))?;
    Ok(RateFit {
        pairs,
        slope,
        intercept,
        r_squared,
        window,
    })
}

/// Fit over every point.
pub fn fit_all(values: &[(f64, f64)]) -> Result<RateFit> {
    fit_rate(values, (f64::NEG_INFINITY, f64::INFINITY))
}
