use std::ops::Range;

use rayon::prelude::*;

use super::noise::RandomLaw;
use crate::error::{Error, Result};
use crate::special_fn::{HermiteTable, RadialBasis};
use crate::spectral::{level_members, CoefficientRule, GridDensity, Layout, SpectralLayout};
use crate::stats::pairwise_sum;

/// Largest number of modes the tensor sampler will enumerate by default.
pub const DEFAULT_MODE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// d = 1, φₙ = 𝔥ₙ.
    OneD,
    /// Radial functions ψₙ in dimension d ≥ 2, evaluated on radii.
    Radial,
    /// Tensor Hermite functions in dimension d ≤ 3.
    Tensor,
}

impl SampleMode {
    pub fn layout(&self, d: usize) -> Layout {
        match self {
            SampleMode::OneD => Layout::Tensor { d: 1 },
            SampleMode::Radial => Layout::Radial { d },
            SampleMode::Tensor => Layout::Tensor { d },
        }
    }
}

/// Evaluation points: a sorted line (1-D points or radii) or full points in
/// ℝ^d stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Line(Vec<f64>),
    Points { d: usize, coords: Vec<f64> },
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::Line(v) => v.len(),
            Grid::Points { d, coords } => coords.len() / d,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> &[f64] {
        match self {
            Grid::Line(v) => std::slice::from_ref(&v[i]),
            Grid::Points { d, coords } => &coords[i * d..(i + 1) * d],
        }
    }

    /// Largest gap between neighbouring points of a line grid.
    pub fn spacing(&self) -> Option<f64> {
        match self {
            Grid::Line(v) if v.len() >= 2 => Some(
                v.windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(0.0, f64::max),
            ),
            _ => None,
        }
    }

    /// Uniform line grid on [lo, hi] containing every multiple of `step`.
    pub fn uniform(lo: f64, hi: f64, step: f64) -> Grid {
        let first = (lo / step).ceil() as i64;
        let last = (hi / step).floor() as i64;
        Grid::Line((first..=last).map(|i| i as f64 * step).collect())
    }

    /// Default sup-search grid for partial sums up to λ: the interval
    /// [−L, L] (1-D) or [0, L] (radii) with L = √λ + 3λ^{1/6}.
    pub fn for_lambda(mode: SampleMode, lambda: f64, density: GridDensity) -> Grid {
        let reach = lambda.sqrt() + 3.0 * lambda.cbrt().sqrt();
        let step = density.spacing(lambda);
        match mode {
            SampleMode::Radial => Grid::uniform(0.0, reach, step),
            _ => Grid::uniform(-reach, reach, step),
        }
    }

    /// Cartesian grid [−L, L]^d with the given step.
    pub fn cube(d: usize, reach: f64, step: f64) -> Grid {
        let axis = match Grid::uniform(-reach, reach, step) {
            Grid::Line(v) => v,
            _ => unreachable!(),
        };
        let count = axis.len().pow(d as u32);
        let mut coords = Vec::with_capacity(count * d);
        for i in 0..count {
            let mut rest = i;
            for _ in 0..d {
                coords.push(axis[rest % axis.len()]);
                rest /= axis.len();
            }
        }
        Grid::Points { d, coords }
    }
}

/// One realization u_λ^ω = Σ_{λₙ≤λ} cₙXₙφₙ evaluated on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSample {
    pub lambda: f64,
    pub seed: u64,
    pub d: usize,
    pub mode: SampleMode,
    pub grid: Grid,
    pub values: Vec<f64>,
}

/// All basis functions of one layout at a point, lowest eigenvalue first.
pub(crate) enum BasisEval {
    OneD(HermiteTable),
    Radial(RadialBasis),
    Tensor {
        members: Vec<Vec<usize>>,
        table: HermiteTable,
    },
}

impl BasisEval {
    pub(crate) fn new(mode: SampleMode, d: usize, count: u64, budget: u64) -> Result<Self> {
        let top = count.saturating_sub(1) as usize;
        match mode {
            SampleMode::OneD => {
                if d != 1 {
                    return Err(Error::Domain(format!("one-dimensional mode needs d = 1, got {d}")));
                }
                Ok(BasisEval::OneD(HermiteTable::new(top)))
            }
            SampleMode::Radial => Ok(BasisEval::Radial(RadialBasis::new(d, top)?)),
            SampleMode::Tensor => {
                if d == 0 || d > 3 {
                    return Err(Error::BudgetExceeded {
                        what: "tensor sampling dimension",
                        needed: d as u64,
                        limit: 3,
                    });
                }
                if count > budget {
                    return Err(Error::BudgetExceeded {
                        what: "tensor modes",
                        needed: count,
                        limit: budget,
                    });
                }
                let layout = SpectralLayout::new(d)?;
                let levels = if count == 0 { 0 } else { layout.level_of_mode(count - 1) + 1 };
                let mut members = Vec::with_capacity(count as usize);
                for m in 0..levels {
                    members.extend(level_members(m as usize, d));
                }
                members.truncate(count as usize);
                Ok(BasisEval::Tensor {
                    members,
                    table: HermiteTable::new(levels.saturating_sub(1) as usize),
                })
            }
        }
    }

    /// Fills `out` (length = mode count) with φₙ(point).
    pub(crate) fn eval(&self, point: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        match self {
            BasisEval::OneD(t) => t.eval_into(point[0], out),
            BasisEval::Radial(b) => b.values_into(point[0].abs(), out),
            BasisEval::Tensor { members, table } => {
                let levels = table.k_max() + 1;
                let d = point.len();
                scratch.resize(levels * d, 0.0);
                for (axis, &x) in point.iter().enumerate() {
                    table.eval_into(x, &mut scratch[axis * levels..(axis + 1) * levels]);
                }
                for (o, alpha) in out.iter_mut().zip(members) {
                    *o = alpha
                        .iter()
                        .enumerate()
                        .fold(1.0, |acc, (axis, &k)| acc * scratch[axis * levels + k]);
                }
            }
        }
    }
}

/// Amplitudes cₙXₙ for the first `count` modes.
pub fn amplitudes(rule: &CoefficientRule, law: RandomLaw, layout: Layout, count: u64, seed: u64) -> Vec<f64> {
    (0..count)
        .map(|n| {
            let c = rule.coefficient(layout, n);
            if c == 0.0 {
                0.0
            } else {
                c * law.draw(seed, n)
            }
        })
        .collect()
}

/// Σ amps[n]·basis[n] by pairwise reduction; the single summation routine
/// behind every sampled value, so batched and one-off paths agree bitwise.
#[inline]
pub(crate) fn combine(amps: &[f64], basis: &[f64], buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend(amps.iter().zip(basis).map(|(a, b)| a * b));
    pairwise_sum(buf)
}

pub fn sample_partial_sum(
    rule: &CoefficientRule,
    law: RandomLaw,
    lambda: f64,
    d: usize,
    mode: SampleMode,
    grid: Grid,
    seed: u64,
) -> Result<FieldSample> {
    sample_partial_sum_with_budget(rule, law, lambda, d, mode, grid, seed, DEFAULT_MODE_BUDGET)
}

#[allow(clippy::too_many_arguments)]
pub fn sample_partial_sum_with_budget(
    rule: &CoefficientRule,
    law: RandomLaw,
    lambda: f64,
    d: usize,
    mode: SampleMode,
    grid: Grid,
    seed: u64,
    budget: u64,
) -> Result<FieldSample> {
    let layout = mode.layout(d);
    let count = layout.modes_up_to(lambda);
    let basis = BasisEval::new(mode, d, count, budget)?;
    let amps = amplitudes(rule, law, layout, count, seed);
    let values = (0..grid.len())
        .into_par_iter()
        .map_init(
            || (vec![0.0; count as usize], Vec::new(), Vec::new()),
            |(row, scratch, buf), i| {
                basis.eval(grid.point(i), row, scratch);
                combine(&amps, row, buf)
            },
        )
        .collect();
    Ok(FieldSample {
        lambda,
        seed,
        d,
        mode,
        grid,
        values,
    })
}

/// sup over the grid of |Σ_{n∈range} amps[t][n]φₙ| for every trial t and
/// every mode range, evaluating the basis once per grid point.
/// Returns `sups[t][r]`.
pub(crate) fn batched_range_sups(
    basis: &BasisEval,
    grid: &Grid,
    amps: &[Vec<f64>],
    ranges: &[Range<usize>],
) -> Vec<Vec<f64>> {
    let count = ranges.iter().map(|r| r.end).max().unwrap_or(0);
    let zero = || vec![vec![0.0f64; ranges.len()]; amps.len()];
    let merge = |mut a: Vec<Vec<f64>>, b: Vec<Vec<f64>>| {
        for (ra, rb) in a.iter_mut().zip(b) {
            for (x, y) in ra.iter_mut().zip(rb) {
                *x = x.max(y);
            }
        }
        a
    };
    (0..grid.len())
        .into_par_iter()
        .fold(
            || (zero(), vec![0.0; count], Vec::new(), Vec::new()),
            |(mut acc, mut row, mut scratch, mut buf), i| {
                basis.eval(grid.point(i), &mut row, &mut scratch);
                for (t, a) in amps.iter().enumerate() {
                    for (k, r) in ranges.iter().enumerate() {
                        let v = combine(&a[r.clone()], &row[r.clone()], &mut buf).abs();
                        if v > acc[t][k] {
                            acc[t][k] = v;
                        }
                    }
                }
                (acc, row, scratch, buf)
            },
        )
        .map(|(acc, ..)| acc)
        .reduce(zero, merge)
}

/// Field values Σₙ amps[t][n]φₙ(x) on every grid point for every trial t,
/// bitwise equal to `sample_partial_sum` with the same amplitudes.
/// Returns `values[t][i]`.
pub(crate) fn batched_fields(basis: &BasisEval, grid: &Grid, amps: &[Vec<f64>]) -> Vec<Vec<f64>> {
    const CHUNK: usize = 4096;
    let count = amps.iter().map(Vec::len).max().unwrap_or(0);
    let chunks: Vec<Vec<Vec<f64>>> = (0..grid.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let (lo, hi) = (c * CHUNK, ((c + 1) * CHUNK).min(grid.len()));
            let mut row = vec![0.0; count];
            let (mut scratch, mut buf) = (Vec::new(), Vec::new());
            let mut out = vec![Vec::with_capacity(hi - lo); amps.len()];
            for i in lo..hi {
                basis.eval(grid.point(i), &mut row, &mut scratch);
                for (t, a) in amps.iter().enumerate() {
                    out[t].push(combine(a, &row[..a.len()], &mut buf));
                }
            }
            out
        })
        .collect();
    let mut values = vec![Vec::with_capacity(grid.len()); amps.len()];
    for chunk in chunks {
        for (v, part) in values.iter_mut().zip(chunk) {
            v.extend(part);
        }
    }
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::hermite_batch;

    #[test]
    fn zero_rule_gives_zero_field() {
        let s = sample_partial_sum(
            &CoefficientRule::Explicit(vec![]),
            RandomLaw::Gaussian,
            50.0,
            1,
            SampleMode::OneD,
            Grid::uniform(-3.0, 3.0, 0.5),
            1,
        )
        .unwrap();
        assert!(s.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn single_mode_sign() {
        let grid = Grid::uniform(-2.0, 2.0, 0.25);
        let s = sample_partial_sum(
            &CoefficientRule::Explicit(vec![1.0]),
            RandomLaw::Rademacher,
            10.0,
            1,
            SampleMode::OneD,
            grid.clone(),
            9,
        )
        .unwrap();
        let sign = RandomLaw::Rademacher.draw(9, 0);
        for (i, v) in s.values.iter().enumerate() {
            let x = grid.point(i)[0];
            assert_eq!(*v, sign * hermite_batch(x, 0).values[0]);
        }
    }

    #[test]
    fn cube_grid_shape() {
        let g = Grid::cube(2, 1.0, 0.5);
        assert_eq!(g.len(), 25);
        assert_eq!(g.point(0), &[-1.0, -1.0]);
    }

    #[test]
    fn batched_matches_single() {
        let rule = CoefficientRule::power_law(0.75);
        let grid = Grid::uniform(-6.0, 6.0, 0.1);
        let layout = Layout::Tensor { d: 1 };
        let count = layout.modes_up_to(40.0);
        let basis = BasisEval::new(SampleMode::OneD, 1, count, DEFAULT_MODE_BUDGET).unwrap();
        let seeds = [3u64, 4];
        let amps: Vec<Vec<f64>> = seeds
            .iter()
            .map(|&s| amplitudes(&rule, RandomLaw::Gaussian, layout, count, s))
            .collect();
        let small = layout.modes_up_to(20.0) as usize;
        let sups = batched_range_sups(&basis, &grid, &amps, &[0..small, 0..count as usize]);
        for (t, &seed) in seeds.iter().enumerate() {
            for (k, lambda) in [20.0, 40.0].into_iter().enumerate() {
                let s = sample_partial_sum(&rule, RandomLaw::Gaussian, lambda, 1, SampleMode::OneD, grid.clone(), seed)
                    .unwrap();
                let sup = s.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                assert_eq!(sup.to_bits(), sups[t][k].to_bits());
            }
        }
    }

    #[test]
    fn batched_fields_match_single() {
        let rule = CoefficientRule::power_law(0.5);
        let grid = Grid::uniform(0.0, 5.0, 0.01);
        let layout = Layout::Radial { d: 2 };
        let count = layout.modes_up_to(60.0);
        let basis = BasisEval::new(SampleMode::Radial, 2, count, DEFAULT_MODE_BUDGET).unwrap();
        let amps: Vec<Vec<f64>> = [7u64, 8]
            .iter()
            .map(|&s| amplitudes(&rule, RandomLaw::Rademacher, layout, count, s))
            .collect();
        let fields = batched_fields(&basis, &grid, &amps);
        for (t, seed) in [7u64, 8].into_iter().enumerate() {
            let s = sample_partial_sum(&rule, RandomLaw::Rademacher, 60.0, 2, SampleMode::Radial, grid.clone(), seed)
                .unwrap();
            assert!(s.values.iter().zip(&fields[t]).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}
