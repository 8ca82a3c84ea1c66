//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature on a partition
//! with caller-supplied breakpoints.
//!
//! The caller fixes the initial panels (seams of the integrand, resolution
//! caps); the integrator then bisects the panel with the largest error
//! estimate until the requested tolerance is met.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::stats::pairwise_sum;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_311_400,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panels: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the refinement order is
    // fully deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// The 21 Kronrod nodes on [−1, 1] in ascending order, with Kronrod
/// weights and Gauss weights (zero at the non-Gauss nodes).
pub fn gk21_rule() -> ([f64; 21], [f64; 21], [f64; 21]) {
    let mut x = [0.0; 21];
    let mut wk = [0.0; 21];
    let mut wg = [0.0; 21];
    for j in 0..10 {
        x[j] = -XGK[j];
        x[20 - j] = XGK[j];
        wk[j] = WGK[j];
        wk[20 - j] = WGK[j];
        if j % 2 == 1 {
            wg[j] = WG[j / 2];
            wg[20 - j] = WG[j / 2];
        }
    }
    wk[10] = WGK[10];
    (x, wk, wg)
}

/// One 21-point Kronrod / 10-point Gauss evaluation on `[a, b]`.
/// Returns `(kronrod, error_estimate)` with the QUADPACK error rescaling.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && round_off > err {
        err = round_off;
    }
    (value, err)
}

/// Integrate `f` over the partition given by `breakpoints` (sorted, at least
/// two entries; the first and last are the integration limits).
pub fn integrate<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], cfg: QuadConfig) -> QuadResult {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk21(&f, w[0], w[1]);
        evaluations += 21;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let totals = |heap: &BinaryHeap<Panel>| {
        let v: f64 = heap.iter().map(|p| p.value).sum();
        let e: f64 = heap.iter().map(|p| p.error).sum();
        (v, e)
    };
    let (mut value, mut error) = totals(&heap);
    let mut converged = error <= cfg.abs_tol.max(cfg.rel_tol * value.abs());
    let mut iterations = 0usize;
    while !converged && heap.len() < cfg.max_panels {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split any further in floating point.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        evaluations += 42;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        iterations += 1;
        // Resynchronise the running sums now and then to stop drift.
        if iterations % 64 == 0 {
            let t = totals(&heap);
            value = t.0;
            error = t.1;
        }
        converged = error <= cfg.abs_tol.max(cfg.rel_tol * value.abs());
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.error).collect();
    let value = pairwise_sum(&values);
    let error = pairwise_sum(&errors);
    QuadResult {
        value,
        error,
        panels: panels.len(),
        evaluations,
        converged: error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
    }
}

/// Breakpoints for `[a, b]` that contain every point of `seams` inside the
/// interval and split every resulting piece into panels no wider than
/// `max_width(midpoint)`.
pub fn partition<W: Fn(f64) -> f64>(a: f64, b: f64, seams: &[f64], max_width: W) -> Vec<f64> {
    let mut cuts: Vec<f64> = seams
        .iter()
        .copied()
        .filter(|s| *s > a && *s < b && s.is_finite())
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();
    let mut out = vec![a];
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut x = lo;
        while x < hi {
            let width = max_width(x).max((hi - lo) * 1e-9);
            let pieces = ((hi - x) / width).ceil().max(1.0);
            if pieces <= 1.0 {
                out.push(hi);
                break;
            }
            let next = (x + width).min(hi);
            out.push(next);
            x = next;
        }
    }
    out.dedup();
    out
}
