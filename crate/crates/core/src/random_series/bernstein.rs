use rayon::prelude::*;

use super::noise::RandomLaw;
use crate::error::{Error, Result};
use crate::lp_analysis::{fit_all, RateFit};
use crate::special_fn::{HermiteTable, RadialBasis};
use crate::spectral::function::refine_top;
use crate::stats::{pairwise_sum, quantile, trial_seed};

/// Grid step (in units of λ^{−1/2}) for the probe's own sup estimates; the
/// local wavelength of any element of the span is at least 2π/√λ.
const PROBE_STEP: f64 = 0.02;

/// Sup of |u| and |u′| for u = Σ aₙφₙ, on the default line for the layout.
fn sup_pair<F>(values: F, lo: f64, hi: f64, step: f64) -> (f64, f64)
where
    F: Fn(f64, &mut Vec<f64>, &mut Vec<f64>) -> (f64, f64) + Sync,
{
    let count = ((hi - lo) / step).ceil() as usize + 1;
    let pts: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(a, b), i| {
                let x = (lo + i as f64 * step).min(hi);
                values(x, a, b)
            },
        )
        .collect();
    let u: Vec<f64> = pts.iter().map(|p| p.0.abs()).collect();
    let du: Vec<f64> = pts.iter().map(|p| p.1.abs()).collect();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let su = refine_top(&u, step, hi - lo, 3, |t| values(lo + t, &mut a, &mut b).0.abs()).1;
    let sdu = refine_top(&du, step, hi - lo, 3, |t| values(lo + t, &mut a, &mut b).1.abs()).1;
    (su, sdu)
}

/// ‖u′‖_∞/‖u‖_∞ for one Gaussian element of the span of the first `count`
/// modes (d = 1 when `d == 1`, radial otherwise).
fn gradient_ratio(d: usize, lambda: f64, seed: u64) -> Result<f64> {
    let reach = lambda.sqrt() + 3.0 * lambda.cbrt().sqrt();
    let step = PROBE_STEP / lambda.sqrt();
    if d == 1 {
        let count = ((lambda - 1.0) / 2.0).floor() as usize + 1;
        let amps: Vec<f64> = (0..count as u64).map(|n| RandomLaw::Gaussian.draw(seed, n)).collect();
        let table = HermiteTable::new(count);
        let sq: Vec<f64> = (0..=count).map(|k| (k as f64).sqrt()).collect();
        let eval = |x: f64, h: &mut Vec<f64>, buf: &mut Vec<f64>| -> (f64, f64) {
            h.resize(count + 1, 0.0);
            table.eval_into(x, h);
            buf.clear();
            buf.extend((0..count).map(|k| amps[k] * h[k]));
            let u = pairwise_sum(buf);
            buf.clear();
            buf.extend((0..count).map(|k| {
                let lower = if k == 0 { 0.0 } else { sq[k] * h[k - 1] };
                amps[k] * std::f64::consts::FRAC_1_SQRT_2 * (lower - sq[k + 1] * h[k + 1])
            }));
            (u, pairwise_sum(buf))
        };
        let (su, sdu) = sup_pair(eval, -reach, reach, step);
        Ok(sdu / su)
    } else {
        let count = ((lambda - d as f64) / 4.0).floor() as usize + 1;
        let amps: Vec<f64> = (0..count as u64).map(|n| RandomLaw::Gaussian.draw(seed, n)).collect();
        let basis = RadialBasis::new(d, count - 1)?;
        let eval = |x: f64, v: &mut Vec<f64>, dv: &mut Vec<f64>| -> (f64, f64) {
            v.resize(count, 0.0);
            dv.resize(count, 0.0);
            basis.values_and_derivatives_into(x, v, dv);
            for (a, b) in v.iter_mut().zip(&amps) {
                *a *= b;
            }
            for (a, b) in dv.iter_mut().zip(&amps) {
                *a *= b;
            }
            (pairwise_sum(v), pairwise_sum(dv))
        };
        let (su, sdu) = sup_pair(eval, 0.0, reach, step);
        Ok(sdu / su)
    }
}

/// Median over trials of ‖∇u‖_∞/‖u‖_∞ for Gaussian random u in the span of
/// eigenfunctions with λₙ ≤ λ, fitted against λ; the slope estimates the
/// Bernstein exponent s(d). `d == 1` uses 𝔥ₙ, `d ≥ 2` radial functions.
pub fn bernstein_probe(d: usize, lambda_list: &[f64], trials: usize, seed: u64) -> Result<RateFit> {
    if d == 0 || trials == 0 {
        return Err(Error::Domain("bernstein probe needs d >= 1 and trials >= 1".into()));
    }
    let mut points = Vec::with_capacity(lambda_list.len());
    for (i, &lambda) in lambda_list.iter().enumerate() {
        let mut ratios = Vec::with_capacity(trials);
        for t in 0..trials {
            let s = trial_seed(seed, (i * trials + t) as u64);
            ratios.push(gradient_ratio(d, lambda, s)?);
        }
        points.push((lambda, quantile(&ratios, 0.5)));
    }
    fit_all(&points)
}

/// ‖𝔥ₙ′‖_∞/‖𝔥ₙ‖_∞ against λₙ = 2n + 1 for single modes.
pub fn bernstein_single_mode(n_list: &[usize]) -> Result<RateFit> {
    let points: Vec<(f64, f64)> = n_list
        .iter()
        .map(|&n| {
            let lambda = 2.0 * n as f64 + 1.0;
            let (su, sdu) = single_mode_sups(n);
            (lambda, sdu / su)
        })
        .collect();
    fit_all(&points)
}

/// (‖𝔥ₙ‖_∞, ‖𝔥ₙ′‖_∞) by grid search plus golden-section refinement.
pub fn single_mode_sups(n: usize) -> (f64, f64) {
    let lambda = 2.0 * n as f64 + 1.0;
    let reach = lambda.sqrt() + 3.0 * lambda.cbrt().sqrt();
    let step = PROBE_STEP / lambda.sqrt();
    let table = HermiteTable::new(n + 1);
    let c_lo = (n as f64).sqrt();
    let c_hi = (n as f64 + 1.0).sqrt();
    let eval = |x: f64, h: &mut Vec<f64>, _: &mut Vec<f64>| -> (f64, f64) {
        h.resize(n + 2, 0.0);
        table.eval_into(x, h);
        let lower = if n == 0 { 0.0 } else { c_lo * h[n - 1] };
        (h[n], std::f64::consts::FRAC_1_SQRT_2 * (lower - c_hi * h[n + 1]))
    };
    sup_pair(eval, 0.0, reach, step)
}
