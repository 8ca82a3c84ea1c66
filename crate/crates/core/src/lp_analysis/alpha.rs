use super::fit::fit_all;
use crate::error::{domain, Result};
use crate::spectral::{CoefficientRule, Layout};
use crate::stats::log_spaced_integers;

/// S_N growth below this slope counts as bounded.
pub const BOUNDED_SLOPE: f64 = 0.02;

/// Growth exponent of S_N = Σ_{n=1}^{N} n^{d/2−1}|cₙ|².
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaStar {
    pub d: usize,
    /// Fitted slope of ln S_N against ln N over the last decade.
    pub slope: f64,
    /// max(slope, 0), or 0 when S_N is judged bounded.
    pub alpha_star: f64,
    pub bounded: bool,
    /// d/α⋆, infinite when bounded.
    pub critical_p: f64,
    /// (N, S_N) on the fitted decade.
    pub partial_sums: Vec<(u64, f64)>,
}

pub fn alpha_star(rule: &CoefficientRule, d: usize, n_max: u64) -> Result<AlphaStar> {
    if n_max < 1000 {
        return domain(format!("alpha_star needs N_max >= 1000, got {n_max}"));
    }
    let layout = Layout::Radial { d };
    let exponent = d as f64 / 2.0 - 1.0;
    let marks = log_spaced_integers((n_max / 10) as usize, n_max as usize, 21);
    let mut partial_sums = Vec::with_capacity(marks.len());
    // Running Kahan-compensated sum; the marks are visited in order.
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut next = marks.iter().peekable();
    for n in 1..=n_max {
        let c = rule.coefficient(layout, n);
        let term = (n as f64).powf(exponent) * c * c - comp;
        let t = sum + term;
        comp = (t - sum) - term;
        sum = t;
        while next.peek().is_some_and(|&&m| m as u64 == n) {
            partial_sums.push((n, sum));
            next.next();
        }
    }
    let positive: Vec<(f64, f64)> = partial_sums
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|&(n, s)| (n as f64, s))
        .collect();
    // A rule with no mass at all is trivially bounded.
    let slope = if positive.len() < 5 {
        0.0
    } else {
        fit_all(&positive)?.slope
    };
    let bounded = slope < BOUNDED_SLOPE;
    let alpha_star = if bounded { 0.0 } else { slope.max(0.0) };
    Ok(AlphaStar {
        d,
        slope,
        alpha_star,
        bounded,
        critical_p: if bounded { f64::INFINITY } else { d as f64 / alpha_star },
        partial_sums,
    })
}

/// min(2d/(d−4κ), ∞) for cₙ = n^{−κ}.
pub fn power_law_critical_p(d: usize, kappa: f64) -> f64 {
    let d = d as f64;
    if 4.0 * kappa >= d {
        f64::INFINITY
    } else {
        2.0 * d / (d - 4.0 * kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_value() {
        let a = alpha_star(&CoefficientRule::power_law(0.5), 4, 100_000).unwrap();
        assert!((a.critical_p - 4.0).abs() < 0.1, "{a:?}");
    }

    #[test]
    fn finite_support_is_bounded() {
        let a = alpha_star(&CoefficientRule::Explicit(vec![1.0; 50]), 3, 10_000).unwrap();
        assert!(a.bounded && a.critical_p.is_infinite());
    }
}
