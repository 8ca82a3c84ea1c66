use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::scaled::{Weight, BIG, SMALL, STEP};

/// All normalized Hermite functions 𝔥₀(t), …, 𝔥_{k_max}(t).
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteBatch {
    pub t: f64,
    pub k_max: usize,
    pub values: Vec<f64>,
}

/// Precomputed coefficients of the normalized upward recurrence
/// 𝔥_{k+1} = √(2/(k+1))·t·𝔥_k − √(k/(k+1))·𝔥_{k−1}.
#[derive(Clone, Debug)]
pub struct HermiteTable {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl HermiteTable {
    pub fn new(k_max: usize) -> Self {
        let a = (0..k_max).map(|k| (2.0 / (k as f64 + 1.0)).sqrt()).collect();
        let b = (0..k_max)
            .map(|k| (k as f64 / (k as f64 + 1.0)).sqrt())
            .collect();
        Self { a, b }
    }

    pub fn k_max(&self) -> usize {
        self.a.len()
    }

    /// Fills `out[k] = 𝔥_k(t)` for `k < out.len()`; `out.len()` must not
    /// exceed `k_max + 1`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let n = out.len();
        if n == 0 {
            return;
        }
        assert!(n <= self.a.len() + 1, "table too short for requested order");
        let mut w = Weight::new(-0.25 * PI.ln() - 0.5 * t * t);
        let mut prev = 0.0;
        let mut cur = 1.0;
        out[0] = w.apply(cur);
        for k in 0..n - 1 {
            let next = self.a[k] * t * cur - self.b[k] * prev;
            prev = cur;
            cur = next;
            if cur.abs() > BIG {
                cur *= SMALL;
                prev *= SMALL;
                w.set_exp(w.exp() + STEP);
            }
            out[k + 1] = w.apply(cur);
        }
    }

    /// 𝔥_k(t) for a single order, without storing the lower orders.
    pub fn value(&self, k: usize, t: f64) -> f64 {
        assert!(k <= self.a.len(), "table too short for requested order");
        let mut w = Weight::new(-0.25 * PI.ln() - 0.5 * t * t);
        let mut prev = 0.0;
        let mut cur = 1.0;
        for j in 0..k {
            let next = self.a[j] * t * cur - self.b[j] * prev;
            prev = cur;
            cur = next;
            if cur.abs() > BIG {
                cur *= SMALL;
                prev *= SMALL;
                w.set_exp(w.exp() + STEP);
            }
        }
        w.apply(cur)
    }
}

pub fn hermite_batch(t: f64, k_max: usize) -> HermiteBatch {
    let table = HermiteTable::new(k_max);
    let mut values = vec![0.0; k_max + 1];
    table.eval_into(t, &mut values);
    HermiteBatch { t, k_max, values }
}

pub fn hermite_value(k: usize, t: f64) -> f64 {
    HermiteTable::new(k).value(k, t)
}

/// 𝔥_k'(t) = 2^{−1/2}(√k·𝔥_{k−1}(t) − √(k+1)·𝔥_{k+1}(t)).
pub fn hermite_derivative(k: usize, t: f64) -> f64 {
    let v = hermite_batch(t, k + 1).values;
    let lower = if k == 0 { 0.0 } else { (k as f64).sqrt() * v[k - 1] };
    FRAC_1_SQRT_2 * (lower - (k as f64 + 1.0).sqrt() * v[k + 1])
}

/// φ_α(x) = 𝔥_{α₁}(x₁)⋯𝔥_{α_d}(x_d); the eigenvalue is 2|α| + d.
pub fn hermite_tensor(alpha: &[usize], x: &[f64]) -> f64 {
    assert_eq!(alpha.len(), x.len(), "multi-index and point differ in length");
    alpha
        .iter()
        .zip(x)
        .fold(1.0, |acc, (&k, &t)| acc * hermite_batch(t, k).values[k])
}
