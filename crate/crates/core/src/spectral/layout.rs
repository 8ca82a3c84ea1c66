use std::ops::Range;

use crate::error::{domain, Result};

/// Dimension-dependent spectral constants and the bucket structure
/// I(j) = {n : 2j ≤ λₙ < 2j + 2} of the tensor Hermite basis.
///
/// Modes are numbered by ascending eigenvalue λ = 2m + d (m = |α|); inside a
/// level the multi-indices follow [`level_members`] order. Bucket j holds the
/// single level m = j − ⌊d/2⌋, or nothing when that is negative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralLayout {
    pub d: usize,
    pub gamma: f64,
    pub beta: f64,
}

impl SpectralLayout {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return domain("dimension must be at least 1");
        }
        let gamma = if d == 1 { -1.0 / 6.0 } else { d as f64 / 2.0 - 1.0 };
        Ok(Self {
            d,
            gamma,
            beta: d as f64 - 1.0 - gamma,
        })
    }

    pub fn eigenvalue_of_level(&self, m: u64) -> f64 {
        2.0 * m as f64 + self.d as f64
    }

    pub fn bucket_of_level(&self, m: u64) -> u64 {
        m + (self.d / 2) as u64
    }

    pub fn level_of_bucket(&self, j: u64) -> Option<u64> {
        j.checked_sub((self.d / 2) as u64)
    }

    /// #I(j) = C(m+d−1, d−1), zero for empty buckets.
    pub fn bucket_size(&self, j: u64) -> u64 {
        self.level_of_bucket(j)
            .map_or(0, |m| binomial(m + self.d as u64 - 1, self.d as u64 - 1))
    }

    /// Number of modes with level < m, i.e. C(m−1+d, d).
    pub fn modes_below_level(&self, m: u64) -> u64 {
        if m == 0 {
            0
        } else {
            binomial(m - 1 + self.d as u64, self.d as u64)
        }
    }

    /// Mode indices belonging to bucket j.
    pub fn bucket_range(&self, j: u64) -> Range<u64> {
        match self.level_of_bucket(j) {
            Some(m) => self.modes_below_level(m)..self.modes_below_level(m + 1),
            None => 0..0,
        }
    }

    /// Level m of mode n, the unique m with C(m−1+d,d) ≤ n < C(m+d,d).
    pub fn level_of_mode(&self, n: u64) -> u64 {
        if self.d == 1 {
            return n;
        }
        // Start from the continuous estimate m ≈ (d!·n)^{1/d} and correct.
        let mut fact = 1.0;
        for i in 1..=self.d {
            fact *= i as f64;
        }
        let mut m = ((fact * n as f64).powf(1.0 / self.d as f64) as u64).saturating_sub(self.d as u64);
        while self.modes_below_level(m + 1) <= n {
            m += 1;
        }
        while m > 0 && self.modes_below_level(m) > n {
            m -= 1;
        }
        m
    }

    pub fn eigenvalue_of_mode(&self, n: u64) -> f64 {
        self.eigenvalue_of_level(self.level_of_mode(n))
    }

    pub fn bucket_of_mode(&self, n: u64) -> u64 {
        self.bucket_of_level(self.level_of_mode(n))
    }

    /// Number of modes with λₙ ≤ λ.
    pub fn modes_up_to(&self, lambda: f64) -> u64 {
        if lambda < self.d as f64 {
            return 0;
        }
        let m = ((lambda - self.d as f64) / 2.0).floor() as u64;
        self.modes_below_level(m + 1)
    }
}

/// Exact binomial coefficient; panics on u64 overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// Bucket j of mode n in dimension d.
pub fn bucket_of(n: u64, d: usize) -> u64 {
    SpectralLayout::new(d.max(1)).expect("d >= 1").bucket_of_mode(n)
}

/// All multi-indices α ∈ ℕ^d with |α| = m, in lexicographic order.
pub fn level_members(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn fill(rest: usize, slot: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slot + 1 == cur.len() {
            cur[slot] = rest;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rest {
            cur[slot] = v;
            fill(rest - v, slot + 1, cur, out);
        }
    }
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    fill(m, 0, &mut vec![0; d], &mut out);
    out
}

/// Members of bucket I(j): the multi-indices α with 2|α| + d ∈ [2j, 2j+2).
pub fn bucket_members(j: u64, d: usize) -> Vec<Vec<usize>> {
    match SpectralLayout::new(d).ok().and_then(|l| l.level_of_bucket(j)) {
        Some(m) => level_members(m as usize, d),
        None => Vec::new(),
    }
}
