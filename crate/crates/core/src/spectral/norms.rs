use super::coefficients::{CoefficientRule, Layout};
use crate::stats::ols;
use crate::stats::{log_spaced_integers, pairwise_sum};

/// Tail-slope margin used by every convergence/boundedness verdict.
pub const SLOPE_MARGIN: f64 = 0.05;

/// Truncated 𝓗ˢ norm (Σ_{n≤n_max} λₙ^s |cₙ|²)^{1/2}.
pub fn hs_norm(rule: &CoefficientRule, s: f64, layout: Layout, n_max: u64) -> f64 {
    let terms: Vec<f64> = (0..=n_max)
        .map(|n| {
            let c = rule.coefficient(layout, n);
            if c == 0.0 {
                0.0
            } else {
                layout.eigenvalue(n).powf(s) * c * c
            }
        })
        .collect();
    pairwise_sum(&terms).sqrt()
}

/// Truncated 𝒵ˢ_φ norm (Σ_{1≤j≤j_max} j^{s+d−1} max_{n∈I(j)} |cₙ|²)^{1/2}.
pub fn zs_norm(rule: &CoefficientRule, s: f64, layout: Layout, j_max: u64) -> f64 {
    let d = layout.d() as f64;
    let terms: Vec<f64> = (1..=j_max)
        .map(|j| {
            let m = rule.bucket_max_sq(layout, j);
            if m == 0.0 {
                0.0
            } else {
                (j as f64).powf(s + d - 1.0) * m
            }
        })
        .collect();
    pairwise_sum(&terms).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Condition {
    /// |c_k|² ≤ C/#I(j) Σ_{I(j)} |cₙ|².
    Condi3,
    /// Two-sided version of `Condi3`.
    Condi4,
    /// Σ_j j^{γ+2β/p} max_{I(j)} |cₙ|² < ∞.
    Condi5 { p: f64 },
    /// Σ_j j^γ (ln j)^α max_{I(j)} |cₙ|² < ∞.
    Cond { alpha: f64 },
    /// Σ_{k=2^J}^{2^{J+1}} max_{I(k)} |cₙ|² ≤ C 2^{(−γ−μ)J} J^{2ν}.
    Condh { mu: f64, nu: f64 },
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub condition: Condition,
    pub holds: bool,
    /// Best constant on the tested range: C (condi3), C₂ (condi4), the
    /// truncated sum (summability conditions) or C (condh).
    pub constant: f64,
    /// C₁ for condi4.
    pub lower_constant: Option<f64>,
    /// Fitted log-log slope of the per-bucket (or per-block) quantity.
    pub tail_slope: f64,
    /// Bucket (or dyadic block) realizing the extreme ratio.
    pub witness: Option<u64>,
    /// Partial sums at log-spaced checkpoints (summability conditions).
    pub partial_sums: Vec<(u64, f64)>,
}

/// Tests a coefficient condition on buckets 1..=j_max.
///
/// Finite data cannot decide limits, so each verdict is a slope test: bucket
/// ratios are bounded when their last-decade log-log slope is below
/// [`SLOPE_MARGIN`], a series converges when its terms decay with slope below
/// −1 − [`SLOPE_MARGIN`].
pub fn check_condition(
    rule: &CoefficientRule,
    which: Condition,
    layout: Layout,
    j_max: u64,
) -> ConditionReport {
    let sl = layout.spectral();
    match which {
        Condition::Condi3 | Condition::Condi4 => {
            let mut upper = Vec::new();
            let mut lower = Vec::new();
            for j in 1..=j_max {
                let size = layout.bucket_size(j);
                let sum = rule.bucket_sum_sq(layout, j);
                if size == 0 || sum == 0.0 {
                    continue;
                }
                let mean = sum / size as f64;
                upper.push((j, rule.bucket_max_sq(layout, j) / mean));
                lower.push((j, rule.bucket_min_sq(layout, j) / mean));
            }
            let (c2, w2) = extreme(&upper, true);
            let up_slope = tail_slope(&upper, j_max);
            let mut holds = up_slope < SLOPE_MARGIN;
            let mut report = ConditionReport {
                condition: which,
                holds,
                constant: c2,
                lower_constant: None,
                tail_slope: up_slope,
                witness: w2,
                partial_sums: Vec::new(),
            };
            if which == Condition::Condi4 {
                let (c1, w1) = extreme(&lower, false);
                let low_slope = tail_slope(&lower, j_max);
                holds = holds && c1 > 0.0 && low_slope > -SLOPE_MARGIN;
                report.lower_constant = Some(c1);
                report.holds = holds;
                if c1 == 0.0 || low_slope <= -SLOPE_MARGIN {
                    report.witness = w1;
                    report.tail_slope = low_slope;
                }
            }
            report
        }
        Condition::Condi5 { .. } | Condition::Cond { .. } => {
            let weight = |j: f64| match which {
                Condition::Condi5 { p } => j.powf(sl.gamma + 2.0 * sl.beta / p),
                Condition::Cond { alpha } => j.powf(sl.gamma) * j.ln().max(0.0).powf(alpha),
                _ => unreachable!(),
            };
            let terms: Vec<(u64, f64)> = (1..=j_max)
                .map(|j| {
                    let m = rule.bucket_max_sq(layout, j);
                    (j, if m == 0.0 { 0.0 } else { weight(j as f64) * m })
                })
                .collect();
            let values: Vec<f64> = terms.iter().map(|t| t.1).collect();
            let checkpoints = log_spaced_integers(1, j_max.max(1) as usize, 40);
            let mut partial_sums = Vec::with_capacity(checkpoints.len());
            let mut acc = 0.0;
            let mut done = 0usize;
            for &c in &checkpoints {
                acc += pairwise_sum(&values[done..c]);
                done = c;
                partial_sums.push((c as u64, acc));
            }
            let nonzero: Vec<(u64, f64)> = terms.into_iter().filter(|t| t.1 > 0.0).collect();
            let slope = tail_slope(&nonzero, j_max);
            ConditionReport {
                condition: which,
                holds: slope < -1.0 - SLOPE_MARGIN,
                constant: pairwise_sum(&values),
                lower_constant: None,
                tail_slope: slope,
                witness: None,
                partial_sums,
            }
        }
        Condition::Condh { mu, nu } => {
            let mut ratios = Vec::new();
            let mut block = 1u64;
            while (1u64 << (block + 1)) <= j_max {
                let lo = 1u64 << block;
                let hi = 1u64 << (block + 1);
                let v: Vec<f64> = (lo..=hi).map(|k| rule.bucket_max_sq(layout, k)).collect();
                let bound = ((-sl.gamma - mu) * block as f64 * std::f64::consts::LN_2).exp()
                    * (block as f64).powf(2.0 * nu);
                ratios.push((block, pairwise_sum(&v) / bound));
                block += 1;
            }
            let (c, w) = extreme(&ratios, true);
            let last = ratios.last().map_or(1, |r| r.0);
            let tail: Vec<(u64, f64)> = ratios
                .iter()
                .copied()
                .filter(|r| r.0 * 2 >= last && r.1 > 0.0)
                .collect();
            let slope = fit_slope(&tail).unwrap_or(f64::NEG_INFINITY);
            ConditionReport {
                condition: which,
                holds: slope < SLOPE_MARGIN,
                constant: c,
                lower_constant: None,
                tail_slope: slope,
                witness: w,
                partial_sums: Vec::new(),
            }
        }
    }
}

fn extreme(values: &[(u64, f64)], largest: bool) -> (f64, Option<u64>) {
    let mut best: Option<(u64, f64)> = None;
    for &(j, v) in values {
        let better = match best {
            None => true,
            Some((_, b)) => (largest && v > b) || (!largest && v < b),
        };
        if better {
            best = Some((j, v));
        }
    }
    match best {
        Some((j, v)) => (v, Some(j)),
        None => (if largest { 0.0 } else { f64::INFINITY }, None),
    }
}

/// Log-log slope over the last decade [j_max/10, j_max]; −∞ when the tail
/// is empty (finitely supported data).
fn tail_slope(values: &[(u64, f64)], j_max: u64) -> f64 {
    let lo = (j_max / 10).max(1);
    let tail: Vec<(u64, f64)> = values
        .iter()
        .copied()
        .filter(|&(j, v)| j >= lo && v > 0.0)
        .collect();
    if tail.is_empty() {
        return f64::NEG_INFINITY;
    }
    fit_slope(&tail).unwrap_or(0.0)
}

fn fit_slope(values: &[(u64, f64)]) -> Option<f64> {
    let x: Vec<f64> = values.iter().map(|v| (v.0 as f64).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.1.ln()).collect();
    ols(&x, &y).map(|f| f.0)
}
