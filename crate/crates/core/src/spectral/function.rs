use rayon::prelude::*;

use super::layout::{level_members, SpectralLayout};
use crate::error::{Error, Result};
use crate::special_fn::{hermite_batch, HermiteTable};
use crate::stats::{golden_max, pairwise_sum};

/// Largest bucket the spectral function will enumerate.
pub const MAX_BUCKET: u64 = 100_000;

/// Grid spacing rule δ(λ) = factor/λ^exponent for sup estimates of functions
/// in the span of eigenfunctions with eigenvalue ≤ λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridDensity {
    pub factor: f64,
    pub exponent: f64,
}

impl GridDensity {
    /// Calibrated by the Bernstein probe (gradient/sup ratio grows like λ^{1/2}).
    pub const CALIBRATED: GridDensity = GridDensity {
        factor: 0.05,
        exponent: 0.5,
    };
    /// Conservative rule used when no calibration is available.
    pub const FALLBACK: GridDensity = GridDensity {
        factor: 0.05,
        exponent: 1.0,
    };

    pub fn spacing(&self, lambda: f64) -> f64 {
        self.factor / lambda.max(1.0).powf(self.exponent)
    }
}

impl Default for GridDensity {
    fn default() -> Self {
        Self::CALIBRATED
    }
}

fn check_budget(d: usize, size: u64) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(Error::BudgetExceeded {
            what: "spectral function dimension",
            needed: d as u64,
            limit: 3,
        });
    }
    if size > MAX_BUCKET {
        return Err(Error::BudgetExceeded {
            what: "bucket size",
            needed: size,
            limit: MAX_BUCKET,
        });
    }
    Ok(())
}

/// Σ_{n∈I(j)} |φₙ(x)|² over the tensor Hermite functions of bucket j.
pub fn spectral_function(j: u64, d: usize, x: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), d, "point dimension must equal d");
    let layout = SpectralLayout::new(d.max(1))?;
    check_budget(d, layout.bucket_size(j))?;
    let Some(m) = layout.level_of_bucket(j) else {
        return Ok(0.0);
    };
    let m = m as usize;
    let per_axis: Vec<Vec<f64>> = x.iter().map(|&t| hermite_batch(t, m).values).collect();
    let terms: Vec<f64> = level_members(m, d)
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(&per_axis)
                .fold(1.0, |acc, (&k, v)| acc * v[k])
                .powi(2)
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// The spectral function of one bucket restricted to the ray x = (r, 0, …, 0).
/// Rotation invariance makes this its full radial profile.
#[derive(Clone, Debug)]
pub struct RaySpectralFunction {
    level: usize,
    weights: Vec<f64>,
    table: HermiteTable,
}

impl RaySpectralFunction {
    /// `None` for an empty bucket.
    pub fn new(j: u64, d: usize) -> Result<Option<Self>> {
        let layout = SpectralLayout::new(d.max(1))?;
        check_budget(d, layout.bucket_size(j))?;
        let Some(m) = layout.level_of_bucket(j) else {
            return Ok(None);
        };
        let m = m as usize;
        // weights[k] = Σ_{|β|=k, β∈ℕ^{d−1}} Π 𝔥_{βᵢ}(0)².
        let g: Vec<f64> = hermite_batch(0.0, m).values.iter().map(|v| v * v).collect();
        let mut weights = vec![0.0; m + 1];
        weights[0] = 1.0;
        for _ in 1..d {
            let prev = weights.clone();
            for k in 0..=m {
                let terms: Vec<f64> = (0..=k).map(|i| g[i] * prev[k - i]).collect();
                weights[k] = pairwise_sum(&terms);
            }
        }
        Ok(Some(Self {
            level: m,
            weights,
            table: HermiteTable::new(m),
        }))
    }

    pub fn eval(&self, r: f64, buf: &mut Vec<f64>) -> f64 {
        buf.resize(self.level + 1, 0.0);
        self.table.eval_into(r, buf);
        let m = self.level;
        for a in 0..=m {
            buf[a] = buf[a] * buf[a] * self.weights[m - a];
        }
        pairwise_sum(buf)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KaradzhovSup {
    pub j: u64,
    pub sup: f64,
    pub argmax: f64,
    /// sup / j^{γ(d)}.
    pub ratio: f64,
}

/// sup_x Σ_{n∈I(j)} |φₙ(x)|² divided by j^{γ(d)}, with the sup taken over
/// the ball of radius √(2j+2) + 3 at the calibrated grid density.
pub fn karadzhov_ratio(j: u64, d: usize) -> Result<f64> {
    Ok(karadzhov_sup(j, d, GridDensity::CALIBRATED)?.ratio)
}

pub fn karadzhov_sup(j: u64, d: usize, density: GridDensity) -> Result<KaradzhovSup> {
    if j == 0 {
        return Err(Error::Domain("karadzhov ratio needs j >= 1".into()));
    }
    let layout = SpectralLayout::new(d.max(1))?;
    let Some(f) = RaySpectralFunction::new(j, d)? else {
        return Ok(KaradzhovSup {
            j,
            sup: 0.0,
            argmax: 0.0,
            ratio: 0.0,
        });
    };
    let lambda = 2.0 * j as f64 + 2.0;
    let radius = lambda.sqrt() + 3.0;
    let delta = density.spacing(lambda);
    let count = (radius / delta).ceil() as usize + 1;
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .map_init(Vec::new, |buf, i| f.eval((i as f64 * delta).min(radius), buf))
        .collect();
    let mut buf = Vec::new();
    let (argmax, sup) = refine_top(&values, delta, radius, 3, |r| f.eval(r, &mut buf));
    Ok(KaradzhovSup {
        j,
        sup,
        argmax,
        ratio: sup / (j as f64).powf(layout.gamma),
    })
}

/// Golden-section refinement of the `top` largest local maxima of a sampled
/// function on the grid iδ (clamped to [0, hi]).
pub(crate) fn refine_top<F: FnMut(f64) -> f64>(
    values: &[f64],
    delta: f64,
    hi: f64,
    top: usize,
    mut f: F,
) -> (f64, f64) {
    let mut peaks: Vec<usize> = (0..values.len())
        .filter(|&i| {
            let left = i == 0 || values[i - 1] <= values[i];
            let right = i + 1 == values.len() || values[i + 1] <= values[i];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(top);
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in peaks {
        let c = (i as f64 * delta).min(hi);
        let (x, v) = golden_max(&mut f, (c - delta).max(0.0), (c + delta).min(hi), delta * 1e-6);
        let v = v.max(values[i]);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ground_state_bucket() {
        // d = 2: level 0 is bucket 1.
        let v = spectral_function(1, 2, &[0.0, 0.0]).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn one_dimensional_is_single_square() {
        let h = hermite_batch(0.9, 7).values[7];
        assert!((spectral_function(7, 1, &[0.9]).unwrap() - h * h).abs() < 1e-16);
    }

    #[test]
    fn ray_matches_direct() {
        for d in 1..=3 {
            for j in [2u64, 5, 9] {
                let Some(f) = RaySpectralFunction::new(j, d).unwrap() else {
                    continue;
                };
                let mut x = vec![0.0; d];
                x[0] = 1.37;
                let direct = spectral_function(j, d, &x).unwrap();
                let ray = f.eval(1.37, &mut Vec::new());
                assert!((direct - ray).abs() < 1e-13, "d={d} j={j}");
            }
        }
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            spectral_function(3, 4, &[0.0; 4]),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
