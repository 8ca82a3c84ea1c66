use super::noise::RandomLaw;
use super::sample::{amplitudes, batched_range_sups, BasisEval, Grid, SampleMode, DEFAULT_MODE_BUDGET};
use crate::error::{Error, Result};
use crate::spectral::{CoefficientRule, GridDensity, Layout};
use crate::stats::{pairwise_sum, quantile, trial_seed};

/// Quantile levels reported for M_λ and the normalized ratios.
pub const QUANTILES: [f64; 3] = [0.5, 0.9, 0.99];

/// Monte Carlo summary of M_λ = ‖u_λ^ω‖_∞ against √(ln λ·ρ_λ).
#[derive(Clone, Debug, PartialEq)]
pub struct SalemZygmundReport {
    pub lambdas: Vec<f64>,
    /// ρ_λ = Σ_{1≤j≤⌊λ/2⌋} j^{γ(d)} max_{n∈I(j)} |cₙ|².
    pub rho: Vec<f64>,
    /// The same sum up to j ≤ λ.
    pub rho_full: Vec<f64>,
    /// Quantiles [`QUANTILES`] of M_λ per λ.
    pub sup_quantiles: Vec<[f64; 3]>,
    /// Quantiles of M_λ/√(ln λ·ρ_λ).
    pub normalized_ratio: Vec<[f64; 3]>,
    /// Quantiles of M_λ/√(ln λ·ρ_λ) with the λ-range sum.
    pub normalized_ratio_full: Vec<[f64; 3]>,
    /// Raw M_λ, indexed `[λ][trial]`.
    pub sups: Vec<Vec<f64>>,
    pub seed: u64,
}

impl SalemZygmundReport {
    /// max/min across λ of the normalized quantile with index `q`.
    pub fn spread(&self, q: usize) -> f64 {
        spread(self.normalized_ratio.iter().map(|r| r[q]))
    }

    pub fn spread_full(&self, q: usize) -> f64 {
        spread(self.normalized_ratio_full.iter().map(|r| r[q]))
    }
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}

/// ρ over buckets 1..=j_max.
pub fn rho(rule: &CoefficientRule, layout: Layout, j_max: u64) -> f64 {
    let gamma = layout.spectral().gamma;
    let terms: Vec<f64> = (1..=j_max)
        .map(|j| {
            let m = rule.bucket_max_sq(layout, j);
            if m == 0.0 {
                0.0
            } else {
                (j as f64).powf(gamma) * m
            }
        })
        .collect();
    pairwise_sum(&terms)
}

/// Runs `trials` independent samples (trial t uses seed
/// `trial_seed(seed, t)`) and records M_λ for every λ of `lambda_list`.
/// All λ share the grid calibrated for the largest λ, and nested partial sums
/// share one noise realization per trial.
pub fn salem_zygmund_experiment(
    rule: &CoefficientRule,
    law: RandomLaw,
    d: usize,
    mode: SampleMode,
    lambda_list: &[f64],
    trials: usize,
    seed: u64,
    density: GridDensity,
) -> Result<SalemZygmundReport> {
    if mode == SampleMode::Tensor {
        return Err(Error::Domain("Salem-Zygmund experiment runs in 1-D or radial mode".into()));
    }
    if lambda_list.is_empty() || trials == 0 {
        return Err(Error::Domain("need at least one lambda and one trial".into()));
    }
    let layout = mode.layout(d);
    let lambda_max = lambda_list.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let count = layout.modes_up_to(lambda_max);
    let basis = BasisEval::new(mode, d, count, DEFAULT_MODE_BUDGET)?;
    let grid = Grid::for_lambda(mode, lambda_max, density);
    let amps: Vec<Vec<f64>> = (0..trials as u64)
        .map(|t| amplitudes(rule, law, layout, count, trial_seed(seed, t)))
        .collect();
    let ranges: Vec<_> = lambda_list
        .iter()
        .map(|&l| 0..layout.modes_up_to(l) as usize)
        .collect();
    let by_trial = batched_range_sups(&basis, &grid, &amps, &ranges);

    let mut report = SalemZygmundReport {
        lambdas: lambda_list.to_vec(),
        rho: Vec::new(),
        rho_full: Vec::new(),
        sup_quantiles: Vec::new(),
        normalized_ratio: Vec::new(),
        normalized_ratio_full: Vec::new(),
        sups: Vec::new(),
        seed,
    };
    for (k, &lambda) in lambda_list.iter().enumerate() {
        let sups: Vec<f64> = by_trial.iter().map(|row| row[k]).collect();
        let r_half = rho(rule, layout, (lambda / 2.0).floor() as u64);
        let r_full = rho(rule, layout, lambda.floor() as u64);
        let q = |xs: &[f64]| QUANTILES.map(|p| quantile(xs, p));
        let scale_half = (lambda.ln() * r_half).sqrt();
        let scale_full = (lambda.ln() * r_full).sqrt();
        let norm_half: Vec<f64> = sups.iter().map(|m| m / scale_half).collect();
        let norm_full: Vec<f64> = sups.iter().map(|m| m / scale_full).collect();
        report.rho.push(r_half);
        report.rho_full.push(r_full);
        report.sup_quantiles.push(q(&sups));
        report.normalized_ratio.push(q(&norm_half));
        report.normalized_ratio_full.push(q(&norm_full));
        report.sups.push(sups);
    }
    Ok(report)
}
