use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::laguerre::LaguerreTable;
use super::scaled::Weight;
use crate::error::{domain, Result};

/// Radial Hermite eigenfunctions ψₙ(x) = c(d)·𝓛ₙ^{(d/2−1)}(|x|²)·|x|^{−(d/2−1)}
/// of H on ℝ^d, with Hψₙ = (4n + d)ψₙ.
///
/// Since c(d)/√Γ(d/2) = π^{−d/4}, the power of |x| cancels and
/// ψₙ(ρ) = π^{−d/4}·qₙ(ρ²)·e^{−ρ²/2}, which is smooth at the origin.
#[derive(Clone, Debug)]
pub struct RadialBasis {
    d: usize,
    c_of_d: f64,
    ln_prefactor: f64,
    table: LaguerreTable,
    upper: LaguerreTable,
    deriv_coef: Vec<f64>,
}

/// Surface measure of the unit sphere S^{d−1}: 2π^{d/2}/Γ(d/2).
pub fn sphere_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

impl RadialBasis {
    pub fn new(d: usize, n_max: usize) -> Result<Self> {
        if d < 2 {
            return domain(format!("radial basis needs d >= 2, got {d}"));
        }
        let alpha = d as f64 / 2.0 - 1.0;
        let deriv_coef = (0..=n_max)
            .map(|n| 2.0 * (n as f64 / (alpha + 1.0)).sqrt())
            .collect();
        Ok(Self {
            d,
            c_of_d: (2.0 / sphere_volume(d)).sqrt(),
            ln_prefactor: -(d as f64) / 4.0 * PI.ln(),
            table: LaguerreTable::new(alpha, n_max)?,
            upper: LaguerreTable::new(alpha + 1.0, n_max.saturating_sub(1))?,
            deriv_coef,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Laguerre parameter α = d/2 − 1.
    pub fn alpha(&self) -> f64 {
        self.table.alpha()
    }

    /// c(d) = √(2/Vol(S^{d−1})).
    pub fn c_of_d(&self) -> f64 {
        self.c_of_d
    }

    pub fn n_max(&self) -> usize {
        self.table.n_max()
    }

    pub fn sphere_volume(&self) -> f64 {
        sphere_volume(self.d)
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        4.0 * n as f64 + self.d as f64
    }

    /// Fills `out[n] = ψₙ(radius)` for n < `out.len()`.
    pub fn values_into(&self, radius: f64, out: &mut [f64]) {
        let r = radius * radius;
        let mut w = Weight::new(self.ln_prefactor - 0.5 * r);
        self.table.recur(r, out.len(), |n, m, e| {
            if e != w.exp() {
                w.set_exp(e);
            }
            out[n] = w.apply(m);
        });
    }

    pub fn value(&self, n: usize, radius: f64) -> f64 {
        let r = radius * radius;
        let mut last = (1.0, 0);
        self.table.recur(r, n + 1, |_, m, e| last = (m, e));
        let mut w = Weight::new(self.ln_prefactor - 0.5 * r);
        w.set_exp(last.1);
        w.apply(last.0)
    }

    /// Values and radial derivatives dψₙ/dρ, using pₙ^{(α)}′ = −√n·p_{n−1}^{(α+1)}.
    pub fn values_and_derivatives_into(&self, radius: f64, vals: &mut [f64], ders: &mut [f64]) {
        assert_eq!(vals.len(), ders.len());
        let count = vals.len();
        self.values_into(radius, vals);
        if count == 0 {
            return;
        }
        let r = radius * radius;
        let mut w = Weight::new(self.ln_prefactor - 0.5 * r);
        ders[0] = 0.0;
        self.upper.recur(r, count - 1, |m, q, e| {
            if e != w.exp() {
                w.set_exp(e);
            }
            ders[m + 1] = w.apply(q);
        });
        for n in 0..count {
            ders[n] = -radius * (self.deriv_coef[n] * ders[n] + vals[n]);
        }
    }
}

/// ψₙ at any point of norm `radius`; the origin uses the continuous extension.
pub fn radial_hermite(n: usize, d: usize, radius: f64) -> Result<f64> {
    if !(radius >= 0.0) {
        return domain(format!("radius must be non-negative, got {radius}"));
    }
    Ok(RadialBasis::new(d, n)?.value(n, radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::laguerre_batch;

    #[test]
    fn ground_state_d2_origin() {
        let v = radial_hermite(0, 2, 0.0).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn c_of_d_two() {
        let b = RadialBasis::new(2, 1).unwrap();
        assert!((b.c_of_d() - (2.0 / (2.0 * PI)).sqrt()).abs() < 1e-12);
        assert!((sphere_volume(3) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn matches_laguerre_definition() {
        let b = RadialBasis::new(3, 2).unwrap();
        let l = laguerre_batch(0.5, 1.0, 2).unwrap();
        let v = radial_hermite(2, 3, 1.0).unwrap();
        assert!((v - b.c_of_d() * l.fn_values[2]).abs() < 1e-14);
        let rho: f64 = 1.7;
        let l = laguerre_batch(0.5, rho * rho, 5).unwrap();
        let expected = b.c_of_d() * l.fn_values[5] * rho.powf(-0.5);
        assert!((radial_hermite(5, 3, rho).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = RadialBasis::new(3, 40).unwrap();
        let mut v = vec![0.0; 41];
        let mut dv = vec![0.0; 41];
        b.values_and_derivatives_into(2.1, &mut v, &mut dv);
        let h = 1e-6;
        for n in [0, 1, 7, 40] {
            let fd = (b.value(n, 2.1 + h) - b.value(n, 2.1 - h)) / (2.0 * h);
            assert!((fd - dv[n]).abs() < 1e-7, "n={n}: {fd} vs {}", dv[n]);
        }
    }

    #[test]
    fn rejects_low_dimension() {
        assert!(radial_hermite(0, 1, 0.0).is_err());
    }
}
