use std::ops::Range;

use super::noise::RandomLaw;
use super::sample::{
    amplitudes, batched_fields, batched_range_sups, BasisEval, Grid, SampleMode, DEFAULT_MODE_BUDGET,
};
use super::sup::window_oscillation;
use crate::error::{Error, Result};
use crate::lp_analysis::{fit_all, RateFit};
use crate::spectral::{CoefficientRule, GridDensity, Layout};
use crate::stats::{ols, pairwise_sum};

/// Mode ranges of the dyadic blocks of buckets [2^K, 2^{K+1}) (block 0 also
/// holds bucket 0), for K = 0..=K_max with every block inside λ ≤ `lambda`.
pub fn dyadic_block_ranges(layout: Layout, lambda: f64) -> Vec<Range<usize>> {
    let count = layout.modes_up_to(lambda) as usize;
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let lo_bucket = if k == 0 { 0 } else { 1u64 << k };
        let hi_bucket = 1u64 << (k + 1);
        let start = layout.bucket_modes(lo_bucket).start as usize;
        let end = layout.bucket_modes(hi_bucket).start as usize;
        if start >= count {
            break;
        }
        out.push(start..end.min(count));
        k += 1;
    }
    out
}

/// Sup norms of the dyadic blocks u_K^ω of one noise realization.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicBlocks {
    pub seed: u64,
    /// ‖u_K^ω‖_∞ for K = 0, 1, ….
    pub sups: Vec<f64>,
}

impl DyadicBlocks {
    /// Running totals Σ_{K'≤K} ‖u_{K'}^ω‖_∞.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.sups
            .iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    }

    /// Last block over the running total; NaN for an all-zero field.
    pub fn final_fraction(&self) -> f64 {
        let total = pairwise_sum(&self.sups);
        match self.sups.last() {
            Some(last) if total > 0.0 => last / total,
            _ => f64::NAN,
        }
    }
}

/// Dyadic-block sup norms for each seed (complete blocks only: the last
/// block must end at or below `lambda`).
pub fn dyadic_block_sups(
    rule: &CoefficientRule,
    law: RandomLaw,
    d: usize,
    mode: SampleMode,
    lambda: f64,
    seeds: &[u64],
    density: GridDensity,
) -> Result<Vec<DyadicBlocks>> {
    if mode == SampleMode::Tensor {
        return Err(Error::Domain("dyadic blocks run in 1-D or radial mode".into()));
    }
    let layout = mode.layout(d);
    let count = layout.modes_up_to(lambda);
    let ranges: Vec<Range<usize>> = dyadic_block_ranges(layout, lambda)
        .into_iter()
        .filter(|r| r.end > r.start)
        .collect();
    let basis = BasisEval::new(mode, d, count, DEFAULT_MODE_BUDGET)?;
    let grid = Grid::for_lambda(mode, lambda, density);
    let amps: Vec<Vec<f64>> = seeds
        .iter()
        .map(|&s| amplitudes(rule, law, layout, count, s))
        .collect();
    let sups = batched_range_sups(&basis, &grid, &amps, &ranges);
    Ok(seeds
        .iter()
        .zip(sups)
        .map(|(&seed, sups)| DyadicBlocks { seed, sups })
        .collect())
}

/// Modulus of continuity of one realization and its fitted h-exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusFit {
    pub seed: u64,
    /// (h, m(h)).
    pub modulus: Vec<(f64, f64)>,
    /// None when the field vanishes identically.
    pub fit: Option<RateFit>,
    /// Slope of ln m(h) − μ ln h against ln|ln h| (the observed log power),
    /// given μ; None with the fit.
    pub log_power: Option<f64>,
}

/// m(h) on a line grid for every seed, fitted over `h_list`. The grid is the
/// calibrated one for `lambda`, refined so that its spacing is at most half
/// the smallest h.
#[allow(clippy::too_many_arguments)]
pub fn modulus_sweep(
    rule: &CoefficientRule,
    law: RandomLaw,
    d: usize,
    mode: SampleMode,
    lambda: f64,
    seeds: &[u64],
    h_list: &[f64],
    mu: f64,
) -> Result<Vec<ModulusFit>> {
    if mode == SampleMode::Tensor {
        return Err(Error::Domain("modulus sweep runs in 1-D or radial mode".into()));
    }
    let h_min = h_list.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(h_min > 0.0) {
        return Err(Error::Domain("h list must be non-empty and positive".into()));
    }
    let layout = mode.layout(d);
    let count = layout.modes_up_to(lambda);
    let basis = BasisEval::new(mode, d, count, DEFAULT_MODE_BUDGET)?;
    let step = GridDensity::CALIBRATED.spacing(lambda).min(0.5 * h_min);
    let reach = lambda.sqrt() + 3.0 * lambda.powf(1.0 / 6.0);
    let lo = if mode == SampleMode::Radial { 0.0 } else { -reach };
    let grid = Grid::uniform(lo, reach, step);
    let Grid::Line(xs) = &grid else { unreachable!() };
    let amps: Vec<Vec<f64>> = seeds
        .iter()
        .map(|&s| amplitudes(rule, law, layout, count, s))
        .collect();
    let fields = batched_fields(&basis, &grid, &amps);
    seeds
        .iter()
        .zip(fields)
        .map(|(&seed, values)| {
            let modulus: Vec<(f64, f64)> = h_list
                .iter()
                .map(|&h| (h, window_oscillation(xs, &values, h)))
                .collect();
            if modulus.iter().all(|m| m.1 == 0.0) {
                return Ok(ModulusFit {
                    seed,
                    modulus,
                    fit: None,
                    log_power: None,
                });
            }
            let fit = fit_all(&modulus)?;
            let x: Vec<f64> = modulus.iter().map(|m| m.0.ln().abs().ln()).collect();
            let y: Vec<f64> = modulus.iter().map(|m| m.1.ln() - mu * m.0.ln()).collect();
            let log_power = ols(&x, &y).map(|f| f.0);
            Ok(ModulusFit {
                seed,
                modulus,
                fit: Some(fit),
                log_power,
            })
        })
        .collect()
}

/// Log power θ in m(h) = O(h^μ |ln h|^θ); None where the field is only
/// claimed differentiable (μ = 1, ν < −1) or outside the admissible range.
pub fn modulus_theta(mu: f64, nu: f64) -> Option<f64> {
    if mu > 0.0 && mu < 1.0 {
        Some(0.5 + nu)
    } else if mu == 0.0 && nu < -1.0 {
        Some(1.0 + nu)
    } else if mu == 1.0 {
        if nu >= -0.5 {
            Some(1.0 + nu)
        } else if nu >= -1.0 {
            Some(0.5)
        } else {
            None
        }
    } else {
        None
    }
}

/// The dyadic bucket law meeting the Hölder block condition with equality:
/// Σ_{k=2^J}^{2^{J+1}} max|cₙ|² = 2^{(−γ(d)−μ)J}J^{2ν}, spread evenly over
/// the 2^J buckets of block J.
pub fn modulus_rule(d: usize, mu: f64, nu: f64) -> Result<CoefficientRule> {
    let gamma = crate::spectral::SpectralLayout::new(d)?.gamma;
    Ok(CoefficientRule::BucketConstant(crate::spectral::BucketLaw::Dyadic {
        scale: 1.0,
        block_power: -gamma - mu - 1.0,
        block_log_power: 2.0 * nu,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_ranges_tile_the_modes() {
        let layout = Layout::Tensor { d: 1 };
        let r = dyadic_block_ranges(layout, 64.0);
        assert_eq!(r[0], 0..2);
        assert_eq!(r[1], 2..4);
        for w in r.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
        assert_eq!(r.last().unwrap().end as u64, layout.modes_up_to(64.0));
    }

    #[test]
    fn theta_table() {
        assert_eq!(modulus_theta(0.5, 0.0), Some(0.5));
        assert_eq!(modulus_theta(1.0, 0.0), Some(1.0));
        assert_eq!(modulus_theta(1.0, -0.75), Some(0.5));
        assert_eq!(modulus_theta(1.0, -2.0), None);
        assert_eq!(modulus_theta(0.0, -2.0), Some(-1.0));
    }

    #[test]
    fn zero_rule_is_degenerate() {
        let fits = modulus_sweep(
            &CoefficientRule::Explicit(vec![]),
            RandomLaw::Rademacher,
            1,
            SampleMode::OneD,
            16.0,
            &[1],
            &[0.1, 0.2],
            0.5,
        )
        .unwrap();
        assert!(fits[0].fit.is_none());
    }
}
