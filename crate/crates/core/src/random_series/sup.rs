use std::collections::VecDeque;

use super::sample::{FieldSample, Grid};
use crate::error::{Error, Result};

/// max |u| over the sample grid: a lower estimate of ‖u‖_∞ whose defect is
/// controlled by the grid density.
pub fn sup_norm(sample: &FieldSample) -> f64 {
    sample.values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// m(h) = sup_{|x−y|≤h} |u(x) − u(y)| over pairs of grid points, for line
/// grids (1-D points or radii; for a radial function the modulus along radii
/// equals the modulus in ℝ^d).
pub fn modulus_of_continuity(sample: &FieldSample, h_list: &[f64]) -> Result<Vec<f64>> {
    let Grid::Line(xs) = &sample.grid else {
        return Err(Error::Domain("modulus of continuity needs a line grid".into()));
    };
    let spacing = sample.grid.spacing().unwrap_or(f64::INFINITY);
    h_list
        .iter()
        .map(|&h| {
            if !(h >= 2.0 * spacing) {
                return Err(Error::HTooSmall { h, spacing });
            }
            Ok(window_oscillation(xs, &sample.values, h))
        })
        .collect()
}

/// max over windows [x_i, x_i + h] of (max − min) of the values, using
/// monotone deques.
pub fn window_oscillation(xs: &[f64], values: &[f64], h: f64) -> f64 {
    let reach = h * (1.0 + 1e-12);
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best: f64 = 0.0;
    let mut left = 0;
    for right in 0..xs.len() {
        while xs[right] - xs[left] > reach {
            left += 1;
        }
        while maxq.back().is_some_and(|&i| values[i] <= values[right]) {
            maxq.pop_back();
        }
        maxq.push_back(right);
        while minq.back().is_some_and(|&i| values[i] >= values[right]) {
            minq.pop_back();
        }
        minq.push_back(right);
        while maxq.front().is_some_and(|&i| i < left) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&i| i < left) {
            minq.pop_front();
        }
        let osc = values[maxq[0]] - values[minq[0]];
        if osc > best {
            best = osc;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_series::SampleMode;

    fn synthetic(values: impl Fn(f64) -> f64) -> FieldSample {
        let grid = Grid::uniform(-1.0, 1.0, 1e-3);
        let Grid::Line(xs) = &grid else { unreachable!() };
        let values = xs.iter().map(|&x| values(x)).collect();
        FieldSample {
            lambda: 1.0,
            seed: 0,
            d: 1,
            mode: SampleMode::OneD,
            grid,
            values,
        }
    }

    #[test]
    fn constant_field() {
        let s = synthetic(|_| 2.5);
        assert!(modulus_of_continuity(&s, &[0.01, 0.1]).unwrap().iter().all(|m| *m == 0.0));
        assert_eq!(sup_norm(&s), 2.5);
    }

    #[test]
    fn linear_field() {
        let s = synthetic(|x| x);
        for (m, h) in modulus_of_continuity(&s, &[0.004, 0.1, 0.5]).unwrap().iter().zip([0.004, 0.1, 0.5]) {
            assert!((m - h).abs() < 1e-12, "{m} vs {h}");
        }
    }

    #[test]
    fn too_small_h() {
        let s = synthetic(|x| x);
        assert!(matches!(modulus_of_continuity(&s, &[1e-3]), Err(Error::HTooSmall { .. })));
    }
}
