use std::f64::consts::PI;

use rayon::prelude::*;
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{domain, Result};
use crate::quadrature::{integrate, partition, QuadConfig};
use crate::special_fn::{sphere_volume, HermiteTable, RadialBasis, DEFAULT_TAIL_GAMMA};
use crate::spectral::function::refine_top;
use crate::spectral::GridDensity;
use crate::stats::pairwise_sum;

/// Constant assumed in front of the exponential tail envelope when bounding
/// the remainder past the last quadrature node.
pub const TAIL_SAFETY: f64 = 10.0;

/// The remainder bound is pushed below this fraction of the integral.
const TAIL_TARGET: f64 = 1e-13;

/// Result of a radial Lᵖ computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpNorm {
    /// ‖ψₙ‖_{Lᵖ}.
    pub value: f64,
    /// ∫|ψₙ|ᵖ over the truncated ball (equal to `value` when p = ∞).
    pub integral: f64,
    /// Estimated quadrature error of `integral`.
    pub quad_error: f64,
    /// Certified bound on the integral over |x| > `cutoff`.
    pub tail_bound: f64,
    /// Radius where quadrature stops.
    pub cutoff: f64,
}

/// ‖ψₙ‖_{Lᵖ(ℝ^d)} for p ∈ [1, ∞].
pub fn lp_norm_radial(n: usize, d: usize, p: f64) -> Result<f64> {
    Ok(lp_norm_radial_detailed(n, d, p)?.value)
}

pub fn lp_norm_radial_detailed(n: usize, d: usize, p: f64) -> Result<LpNorm> {
    if !(p >= 1.0) {
        return domain(format!("p must be at least 1, got {p}"));
    }
    let basis = RadialBasis::new(d, n)?;
    if p == f64::INFINITY {
        let (_, sup) = radial_sup(&basis, n);
        return Ok(LpNorm {
            value: sup,
            integral: sup,
            quad_error: 0.0,
            tail_bound: 0.0,
            cutoff: f64::INFINITY,
        });
    }
    let nu = basis.eigenvalue(n);
    let vol = basis.sphere_volume();
    let integrand = |rho: f64| {
        let v = basis.value(n, rho).abs();
        if v == 0.0 {
            0.0
        } else {
            vol * v.powf(p) * rho.powi(d as i32 - 1)
        }
    };
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_panels: 50_000,
    };
    let core = (1.5 * nu).sqrt();
    let head = integrate(integrand, &radial_breaks(nu, core), cfg);
    let r_cut = tail_cutoff(d, p, 1.0, 1.5 * nu, head.value.abs());
    let cutoff = r_cut.sqrt();
    let rest = if cutoff > core {
        let breaks = partition(core, cutoff, &[], |_| wavelength(nu));
        // Values here sit far below the head; a relative target alone would
        // chase subnormal noise.
        let cfg = QuadConfig {
            abs_tol: 1e-3 * cfg.rel_tol * head.value.abs(),
            ..cfg
        };
        integrate(integrand, &breaks, cfg)
    } else {
        head
    };
    let (integral, quad_error) = if cutoff > core {
        (head.value + rest.value, head.error + rest.error)
    } else {
        (head.value, head.error)
    };
    Ok(LpNorm {
        value: integral.powf(1.0 / p),
        integral,
        quad_error,
        tail_bound: tail_bound(d, p, 1.0, r_cut),
        cutoff,
    })
}

fn wavelength(lambda: f64) -> f64 {
    2.0 * PI / lambda.sqrt()
}

/// Breakpoints in ρ = |x| on [0, hi]: the envelope seams 1/ν, ν/2, ν, 3ν/2
/// (in r = ρ²) and the turning window, with panels no wider than a local
/// wavelength and narrower still across the turning point.
fn radial_breaks(nu: f64, hi: f64) -> Vec<f64> {
    let window = 5.0 * nu.cbrt();
    let seams_r = [1.0 / nu, nu / 2.0, nu - window, nu, nu + window, 1.5 * nu];
    let seams: Vec<f64> = seams_r.iter().filter(|r| **r > 0.0).map(|r| r.sqrt()).collect();
    let (lo_w, hi_w) = ((nu - window).max(0.0).sqrt(), (nu + window).sqrt());
    let airy = nu.powf(-1.0 / 6.0) / 8.0;
    let wave = wavelength(nu);
    partition(0.0, hi, &seams, |rho| {
        if rho >= lo_w && rho <= hi_w {
            wave.min(airy)
        } else {
            wave
        }
    })
}

/// Bound on Vol·∫_{ρ>√r_cut} (amp·c(d)·C·e^{−γr}·r^{−α/2})ᵖ ρ^{d−1} dρ with
/// α = d/2 − 1, C = `TAIL_SAFETY`, γ the default tail rate; `amp` scales the
/// envelope (1 for a single normalized function).
pub fn tail_bound(d: usize, p: f64, amp: f64, r_cut: f64) -> f64 {
    let alpha = d as f64 / 2.0 - 1.0;
    let vol = sphere_volume(d);
    let c = (2.0 / vol).sqrt();
    let a = alpha * (1.0 - p / 2.0);
    let b = DEFAULT_TAIL_GAMMA * p;
    let scale = 0.5 * vol * (amp * c * TAIL_SAFETY).powf(p);
    let tail = if a <= 0.0 {
        // r^a is non-increasing past r_cut.
        (a * r_cut.ln() - b * r_cut).exp() / b
    } else {
        let s = a + 1.0;
        (ln_gamma(s) - s * b.ln()).exp() * gamma_ur(s, b * r_cut)
    };
    scale * tail
}

/// Smallest r ≥ `start` (stepping by a fixed amount) where the tail bound
/// drops below `TAIL_TARGET · reference`.
fn tail_cutoff(d: usize, p: f64, amp: f64, start: f64, reference: f64) -> f64 {
    let step = 1.0 / (DEFAULT_TAIL_GAMMA * p);
    let goal = TAIL_TARGET * reference.max(f64::MIN_POSITIVE);
    let mut r = start;
    for _ in 0..100_000 {
        if tail_bound(d, p, amp, r) <= goal {
            break;
        }
        r += step;
    }
    r
}

/// Grid maximum of |ψₙ| over [0, √λ + 3λ^{1/6}] with golden-section
/// refinement of the largest peaks. Returns (argmax, max).
fn radial_sup(basis: &RadialBasis, n: usize) -> (f64, f64) {
    let lambda = basis.eigenvalue(n);
    let hi = lambda.sqrt() + 3.0 * lambda.powf(1.0 / 6.0);
    let delta = GridDensity::CALIBRATED.spacing(lambda);
    let count = (hi / delta).ceil() as usize + 1;
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| basis.value(n, (i as f64 * delta).min(hi)).abs())
        .collect();
    refine_top(&values, delta, hi, 3, |rho| basis.value(n, rho).abs())
}

/// ‖𝔥ₙ‖_{L^∞(ℝ)} of the normalized 1-D Hermite function, by grid search over
/// [0, √(2n+1) + 3(2n+1)^{1/6}] (|𝔥ₙ| is even) and peak refinement.
pub fn hermite_sup_norm(n: usize) -> f64 {
    let table = HermiteTable::new(n);
    let lambda = 2.0 * n as f64 + 1.0;
    let hi = lambda.sqrt() + 3.0 * lambda.powf(1.0 / 6.0);
    let delta = GridDensity::CALIBRATED.spacing(lambda);
    let count = (hi / delta).ceil() as usize + 1;
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| table.value(n, (i as f64 * delta).min(hi)).abs())
        .collect();
    refine_top(&values, delta, hi, 3, |t| table.value(n, t).abs()).1
}

/// ∫|ψₙ|² for all n ≤ `n_max` at once.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationSweep {
    pub d: usize,
    pub integrals: Vec<f64>,
    /// Per-mode quadrature error estimate (rescaled Kronrod–Gauss gap).
    pub errors: Vec<f64>,
    pub tail_bound: f64,
    pub cutoff: f64,
}

impl NormalizationSweep {
    /// max over n of |∫ψₙ² − 1|.
    pub fn max_deviation(&self) -> f64 {
        self.integrals.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// L² norms of ψ₀..ψ_{n_max} on one fixed composite 21-point Kronrod rule
/// fine enough for the highest mode, evaluating the whole family at each node.
pub fn normalization_sweep(d: usize, n_max: usize) -> Result<NormalizationSweep> {
    let basis = RadialBasis::new(d, n_max)?;
    let nu = basis.eigenvalue(n_max);
    let vol = basis.sphere_volume();
    let r_cut = tail_cutoff(d, 2.0, 1.0, 1.5 * nu, 1.0);
    let cutoff = r_cut.sqrt();
    let width = (0.5 * wavelength(nu)).min(nu.powf(-1.0 / 6.0) / 8.0);
    let breaks = partition(0.0, cutoff, &[], |_| width);
    let count = n_max + 1;
    let (kx, kw, gw) = crate::quadrature::gk21_rule();
    // Each panel yields per-mode (kronrod, gauss, |kronrod| mass).
    let panels: Vec<Vec<[f64; 3]>> = breaks
        .par_windows(2)
        .map_init(
            || vec![0.0; count],
            |vals, w| {
                let (a, b) = (w[0], w[1]);
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                let mut acc = vec![[0.0; 3]; count];
                for (i, (&x, &wk)) in kx.iter().zip(kw.iter()).enumerate() {
                    let rho = mid + half * x;
                    basis.values_into(rho, vals);
                    let jac = vol * rho.powi(d as i32 - 1) * half;
                    let wg = gw[i];
                    for (slot, v) in acc.iter_mut().zip(vals.iter()) {
                        let f = v * v * jac;
                        slot[0] += wk * f;
                        slot[1] += wg * f;
                        slot[2] += wk * f.abs();
                    }
                }
                acc
            },
        )
        .collect();
    let mut integrals = Vec::with_capacity(count);
    let mut errors = Vec::with_capacity(count);
    let mut column = vec![0.0; panels.len()];
    let mut column_err = vec![0.0; panels.len()];
    for n in 0..count {
        for (k, p) in panels.iter().enumerate() {
            let [kr, ga, mass] = p[n];
            column[k] = kr;
            let gap = (kr - ga).abs();
            column_err[k] = if mass > 0.0 && gap > 0.0 {
                mass * (200.0 * gap / mass).powf(1.5).min(1.0)
            } else {
                0.0
            };
        }
        integrals.push(pairwise_sum(&column));
        errors.push(pairwise_sum(&column_err));
    }
    Ok(NormalizationSweep {
        d,
        integrals,
        errors,
        tail_bound: tail_bound(d, 2.0, 1.0, r_cut),
        cutoff,
    })
}

/// Lower-bound certificate near the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBound {
    pub n: usize,
    pub epsilon: f64,
    /// c from the Laguerre lower-bound search.
    pub c_laguerre: f64,
    /// min over |x| ≤ ε/√n of |ψₙ(x)|/n^{d/4−1/2} (grid of 257 radii).
    pub min_ratio: f64,
    /// The same minimum implied by the Laguerre bound:
    /// π^{−d/4}·√Γ(d/2)·c·n^α·√(n!/Γ(n+α+1))·e^{−ε²/(2n)}/n^{d/4−1/2}.
    pub implied: f64,
}

pub fn lower_bound_certificate(n: usize, d: usize) -> Result<LowerBound> {
    if n == 0 {
        return domain("lower-bound certificate needs n >= 1");
    }
    let basis = RadialBasis::new(d, n)?;
    let alpha = basis.alpha();
    let (epsilon, c) = crate::special_fn::szeg_lower_region(n, alpha)?;
    let nf = n as f64;
    let scale = nf.powf(d as f64 / 4.0 - 0.5);
    let hi = epsilon / nf.sqrt();
    let min_ratio = (0..=256)
        .map(|i| basis.value(n, hi * i as f64 / 256.0).abs() / scale)
        .fold(f64::INFINITY, f64::min);
    let ln_norm = 0.5 * (ln_gamma(nf + 1.0) - ln_gamma(nf + alpha + 1.0));
    let implied = (0.5 * ln_gamma(d as f64 / 2.0) - (d as f64) / 4.0 * PI.ln() + c.ln() + alpha * nf.ln() + ln_norm
        - epsilon * epsilon / (2.0 * nf))
        .exp()
        / scale;
    Ok(LowerBound {
        n,
        epsilon,
        c_laguerre: c,
        min_ratio,
        implied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_norms() {
        // ψ₀ = π^{−d/4} e^{−ρ²/2}; ‖ψ₀‖_p^p = π^{−dp/4}(2π/p)^{d/2}.
        for d in [2usize, 3, 4] {
            for p in [1.0, 2.0, 3.0, 6.0] {
                let exact = (PI.powf(-(d as f64) * p / 4.0) * (2.0 * PI / p).powf(d as f64 / 2.0)).powf(1.0 / p);
                let got = lp_norm_radial(0, d, p).unwrap();
                assert!((got / exact - 1.0).abs() < 1e-11, "d={d} p={p}");
            }
        }
        assert!((lp_norm_radial(0, 2, f64::INFINITY).unwrap() - PI.powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn tail_is_tiny() {
        let r = lp_norm_radial_detailed(40, 3, 4.0).unwrap();
        assert!(r.tail_bound < 1e-10 * r.integral);
        assert!(r.quad_error < 1e-10 * r.integral);
    }

    #[test]
    fn small_sweep() {
        let s = normalization_sweep(3, 30).unwrap();
        assert!(s.max_deviation() < 1e-12, "{}", s.max_deviation());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(lp_norm_radial(3, 1, 2.0).is_err());
        assert!(lp_norm_radial(3, 2, 0.5).is_err());
    }
}
