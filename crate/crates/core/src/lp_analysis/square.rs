use std::cell::RefCell;
use std::f64::consts::PI;

use super::fit::fit_all;
use super::norms::tail_bound;
use crate::error::{domain, Result};
use crate::quadrature::{integrate, partition, QuadConfig};
use crate::spectral::{CoefficientRule, Layout, SLOPE_MARGIN};
use crate::special_fn::{RadialBasis, DEFAULT_TAIL_GAMMA};
use crate::stats::pairwise_sum;

/// ‖(Σ_{λₙ≤λ} |cₙψₙ|²)^{1/2}‖_{Lᵖ(ℝ^d)} for the radial family.
pub fn square_function_lp(rule: &CoefficientRule, d: usize, p: f64, lambda: f64) -> Result<f64> {
    if d < 2 {
        return domain(format!("square function needs d >= 2, got {d}"));
    }
    if !(p >= 2.0) || !p.is_finite() {
        return domain(format!("square function needs finite p >= 2, got {p}"));
    }
    let layout = Layout::Radial { d };
    let count = layout.modes_up_to(lambda) as usize;
    if count == 0 {
        return Ok(0.0);
    }
    let weights: Vec<f64> = (0..count as u64)
        .map(|n| rule.coefficient(layout, n).powi(2))
        .collect();
    let mass = pairwise_sum(&weights);
    if mass == 0.0 {
        return Ok(0.0);
    }
    let basis = RadialBasis::new(d, count - 1)?;
    let vol = basis.sphere_volume();
    let nu = basis.eigenvalue(count - 1);
    let half_p = p / 2.0;
    let scratch = RefCell::new(vec![0.0; count]);
    let integrand = |rho: f64| {
        let mut vals = scratch.borrow_mut();
        basis.values_into(rho, &mut vals);
        for (v, w) in vals.iter_mut().zip(&weights) {
            *v = w * *v * *v;
        }
        let g = pairwise_sum(&vals);
        if g == 0.0 {
            0.0
        } else {
            vol * g.powf(half_p) * rho.powi(d as i32 - 1)
        }
    };
    // Tail cut where even the envelope of the whole sum is negligible.
    let amp = mass.sqrt();
    let step = 1.0 / (DEFAULT_TAIL_GAMMA * p);
    let mut r_cut = 1.5 * nu;
    let wave = 2.0 * PI / nu.sqrt();
    let seams = [(0.5 * nu).sqrt(), nu.sqrt()];
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_panels: 50_000,
    };
    let head = integrate(integrand, &partition(0.0, r_cut.sqrt(), &seams, |_| wave), cfg);
    let goal = 1e-13 * head.value;
    let mut guard = 0;
    while tail_bound(d, p, amp, r_cut) > goal && guard < 100_000 {
        r_cut += step;
        guard += 1;
    }
    let core = (1.5 * nu).sqrt();
    let total = if r_cut.sqrt() > core {
        let cfg = QuadConfig {
            abs_tol: 1e-3 * cfg.rel_tol * head.value,
            ..cfg
        };
        head.value + integrate(integrand, &partition(core, r_cut.sqrt(), &[], |_| wave), cfg).value
    } else {
        head.value
    };
    Ok(total.powf(1.0 / p))
}

/// Convergence call from a λ-sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
    Undecided,
}

/// Square-function norms over a geometric λ-sweep.
///
/// The verdict is read off the log-log slope of the increments
/// Δₖ = I(λₖ₊₁) − I(λₖ) of I = (square-function norm)ᵖ, whose asymptotic
/// exponent is (α⋆p − d)/2: below −`SLOPE_MARGIN` the norms converge, above
/// +`SLOPE_MARGIN` they diverge.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareFunctionSweep {
    pub p: f64,
    /// (λ, norm).
    pub values: Vec<(f64, f64)>,
    pub increment_slope: f64,
    /// (last − value a decade earlier)/last; NaN if the sweep spans less.
    pub cauchy_tail: f64,
    pub verdict: Verdict,
}

pub fn square_function_sweep(
    rule: &CoefficientRule,
    d: usize,
    p: f64,
    lambdas: &[f64],
) -> Result<SquareFunctionSweep> {
    let values: Vec<(f64, f64)> = lambdas
        .iter()
        .map(|&l| square_function_lp(rule, d, p, l).map(|v| (l, v)))
        .collect::<Result<_>>()?;
    let increments: Vec<(f64, f64)> = values
        .windows(2)
        .map(|w| (w[1].0, w[1].1.powf(p) - w[0].1.powf(p)))
        .filter(|x| x.1 > 0.0)
        .collect();
    let increment_slope = if increments.len() >= 5 {
        fit_all(&increments)?.slope
    } else {
        f64::NAN
    };
    let verdict = if increment_slope < -SLOPE_MARGIN {
        Verdict::Converges
    } else if increment_slope > SLOPE_MARGIN {
        Verdict::Diverges
    } else {
        Verdict::Undecided
    };
    let cauchy_tail = match values.last() {
        Some(&(l, v)) => values
            .iter()
            .rev()
            .find(|x| x.0 <= l / 10.0)
            .map_or(f64::NAN, |&(_, w)| (v - w) / v),
        None => f64::NAN,
    };
    Ok(SquareFunctionSweep {
        p,
        values,
        increment_slope,
        cauchy_tail,
        verdict,
    })
}
