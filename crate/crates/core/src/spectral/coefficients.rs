use std::ops::Range;

use super::layout::SpectralLayout;

/// Which orthonormal family the coefficients multiply.
///
/// `Tensor` numbers all tensor Hermite functions by ascending eigenvalue
/// (this includes d = 1). `Radial` numbers the radial functions ψₙ with
/// eigenvalue 4n + d; each ψₙ sits inside the eigenspace of bucket
/// 2n + ⌊d/2⌋, where it is one unit vector of an orthonormal basis and all
/// other coefficients of that bucket vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Tensor { d: usize },
    Radial { d: usize },
}

impl Layout {
    pub fn d(&self) -> usize {
        match *self {
            Layout::Tensor { d } | Layout::Radial { d } => d,
        }
    }

    pub fn spectral(&self) -> SpectralLayout {
        SpectralLayout::new(self.d()).expect("layout dimension is positive")
    }

    pub fn eigenvalue(&self, n: u64) -> f64 {
        match *self {
            Layout::Tensor { .. } => self.spectral().eigenvalue_of_mode(n),
            Layout::Radial { d } => 4.0 * n as f64 + d as f64,
        }
    }

    pub fn bucket_of(&self, n: u64) -> u64 {
        match *self {
            Layout::Tensor { .. } => self.spectral().bucket_of_mode(n),
            Layout::Radial { d } => 2 * n + (d / 2) as u64,
        }
    }

    /// Number of modes of this layout with λₙ ≤ λ.
    pub fn modes_up_to(&self, lambda: f64) -> u64 {
        match *self {
            Layout::Tensor { .. } => self.spectral().modes_up_to(lambda),
            Layout::Radial { d } => {
                if lambda < d as f64 {
                    0
                } else {
                    ((lambda - d as f64) / 4.0).floor() as u64 + 1
                }
            }
        }
    }

    /// Indices (in this layout's numbering) of the modes inside bucket j.
    pub fn bucket_modes(&self, j: u64) -> Range<u64> {
        match *self {
            Layout::Tensor { .. } => self.spectral().bucket_range(j),
            Layout::Radial { d } => match j.checked_sub((d / 2) as u64) {
                Some(m) if m % 2 == 0 => m / 2..m / 2 + 1,
                _ => 0..0,
            },
        }
    }

    /// Dimension #I(j) of the full eigenspace behind bucket j.
    pub fn bucket_size(&self, j: u64) -> u64 {
        self.spectral().bucket_size(j)
    }
}

/// Per-bucket value of |cₙ|² for [`CoefficientRule::BucketConstant`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BucketLaw {
    /// scale · j^{j_power} · ln(j + log_shift)^{log_power}.
    Power {
        scale: f64,
        j_power: f64,
        log_power: f64,
        log_shift: f64,
    },
    /// scale · 2^{block_power·J} · max(J, 1)^{block_log_power} with J = ⌊log₂ j⌋,
    /// constant on each dyadic block [2^J, 2^{J+1}).
    Dyadic {
        scale: f64,
        block_power: f64,
        block_log_power: f64,
    },
}

impl BucketLaw {
    pub fn power(scale: f64, j_power: f64) -> Self {
        BucketLaw::Power {
            scale,
            j_power,
            log_power: 0.0,
            log_shift: 0.0,
        }
    }

    /// |c|² on bucket j; zero on the bucket j = 0.
    pub fn value_sq(&self, j: u64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let jf = j as f64;
        match *self {
            BucketLaw::Power {
                scale,
                j_power,
                log_power,
                log_shift,
            } => {
                let log_term = if log_power == 0.0 {
                    1.0
                } else {
                    (jf + log_shift).ln().powf(log_power)
                };
                scale * jf.powf(j_power) * log_term
            }
            BucketLaw::Dyadic {
                scale,
                block_power,
                block_log_power,
            } => {
                let block = 63 - j.leading_zeros();
                let jb = f64::from(block);
                scale * (block_power * jb * std::f64::consts::LN_2).exp() * jb.max(1.0).powf(block_log_power)
            }
        }
    }
}

/// Deterministic coefficients cₙ.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientRule {
    /// cₙ = n^{−κ} for n ≥ 1 and c₀ = `c0`.
    PowerLaw { kappa: f64, c0: f64 },
    /// |cₙ|² equal on each bucket, cₙ = √law(j) ≥ 0.
    BucketConstant(BucketLaw),
    /// cₙ = list[n], zero past the end.
    Explicit(Vec<f64>),
}

impl CoefficientRule {
    pub fn power_law(kappa: f64) -> Self {
        CoefficientRule::PowerLaw { kappa, c0: 1.0 }
    }

    pub fn coefficient(&self, layout: Layout, n: u64) -> f64 {
        match self {
            CoefficientRule::PowerLaw { kappa, c0 } => {
                if n == 0 {
                    *c0
                } else {
                    (n as f64).powf(-kappa)
                }
            }
            CoefficientRule::BucketConstant(law) => law.value_sq(layout.bucket_of(n)).sqrt(),
            CoefficientRule::Explicit(list) => list.get(n as usize).copied().unwrap_or(0.0),
        }
    }

    /// Coefficients c₀, …, c_{count−1}.
    pub fn coefficients(&self, layout: Layout, count: u64) -> Vec<f64> {
        (0..count).map(|n| self.coefficient(layout, n)).collect()
    }

    /// max_{n∈I(j)} |cₙ|² over the full eigenspace of bucket j.
    pub fn bucket_max_sq(&self, layout: Layout, j: u64) -> f64 {
        let range = layout.bucket_modes(j);
        if range.is_empty() {
            return 0.0;
        }
        match self {
            CoefficientRule::BucketConstant(law) => law.value_sq(j),
            CoefficientRule::PowerLaw { .. } => self
                .monotone_candidates(&range)
                .map(|n| self.coefficient(layout, n).powi(2))
                .fold(0.0, f64::max),
            CoefficientRule::Explicit(list) => clip(&range, list.len())
                .map(|n| list[n as usize].powi(2))
                .fold(0.0, f64::max),
        }
    }

    /// min_{n∈I(j)} |cₙ|² over the full eigenspace of bucket j.
    pub fn bucket_min_sq(&self, layout: Layout, j: u64) -> f64 {
        let range = layout.bucket_modes(j);
        let size = layout.bucket_size(j);
        if range.is_empty() || (range.end - range.start) < size {
            // Radial embedding: the rest of the eigenspace carries zeros.
            return 0.0;
        }
        match self {
            CoefficientRule::BucketConstant(law) => law.value_sq(j),
            CoefficientRule::PowerLaw { .. } => self
                .monotone_candidates(&range)
                .map(|n| self.coefficient(layout, n).powi(2))
                .fold(f64::INFINITY, f64::min),
            CoefficientRule::Explicit(list) => {
                if range.end as usize > list.len() {
                    0.0
                } else {
                    range
                        .map(|n| list[n as usize].powi(2))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Σ_{n∈I(j)} |cₙ|².
    pub fn bucket_sum_sq(&self, layout: Layout, j: u64) -> f64 {
        let range = layout.bucket_modes(j);
        match self {
            CoefficientRule::BucketConstant(law) => law.value_sq(j) * (range.end - range.start) as f64,
            CoefficientRule::Explicit(list) => {
                let v: Vec<f64> = clip(&range, list.len()).map(|n| list[n as usize].powi(2)).collect();
                crate::stats::pairwise_sum(&v)
            }
            CoefficientRule::PowerLaw { .. } => {
                let v: Vec<f64> = range.map(|n| self.coefficient(layout, n).powi(2)).collect();
                crate::stats::pairwise_sum(&v)
            }
        }
    }

    // A power law is monotone in n ≥ 1, so its extremes over a range are at
    // the ends (plus n = 1 when the range starts at the separate c₀).
    fn monotone_candidates(&self, range: &Range<u64>) -> impl Iterator<Item = u64> {
        let (a, b) = (range.start, range.end);
        let second = if a == 0 && b > 1 { Some(1) } else { None };
        [Some(a), second, Some(b - 1)].into_iter().flatten()
    }
}

fn clip(range: &Range<u64>, len: usize) -> Range<u64> {
    range.start.min(len as u64)..range.end.min(len as u64)
}
