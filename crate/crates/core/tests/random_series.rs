use hermite_series::random_series::*;
use hermite_series::spectral::{BucketLaw, CoefficientRule, GridDensity, Layout};
use hermite_series::stats::trial_seed;
use proptest::prelude::*;

fn line(lambda: f64, step: f64) -> Grid {
    let reach = lambda.sqrt() + 8.0;
    Grid::uniform(-reach, reach, step)
}

fn l2_squared(sample: &FieldSample) -> f64 {
    let step = sample.grid.spacing().unwrap();
    sample.values.iter().map(|v| v * v).sum::<f64>() * step
}

#[test]
fn bitwise_identical_across_thread_counts() {
    let rule = CoefficientRule::power_law(0.6);
    let sample = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                sample_partial_sum(&rule, RandomLaw::Gaussian, 300.0, 1, SampleMode::OneD, line(300.0, 0.01), 11)
                    .unwrap()
            })
    };
    let a = sample(1);
    let b = sample(3);
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn rademacher_fields_keep_coefficient_mass() {
    // ‖u^ω‖²_{L²} = Σ|cₙ|²Xₙ² = Σ|cₙ|² exactly for ±1 noise.
    let rule = CoefficientRule::power_law(0.4);
    let layout = Layout::Tensor { d: 1 };
    let lambda = 80.0;
    let mass: f64 = rule.coefficients(layout, layout.modes_up_to(lambda)).iter().map(|c| c * c).sum();
    for seed in 0..4 {
        let s = sample_partial_sum(&rule, RandomLaw::Rademacher, lambda, 1, SampleMode::OneD, line(lambda, 0.01), seed)
            .unwrap();
        assert!((l2_squared(&s) / mass - 1.0).abs() < 1e-9);
    }
}

#[test]
fn gaussian_mean_square_matches_coefficient_mass() {
    let rule = CoefficientRule::power_law(0.3);
    let layout = Layout::Tensor { d: 1 };
    let lambda = 60.0;
    let coeffs = rule.coefficients(layout, layout.modes_up_to(lambda));
    let mass: f64 = coeffs.iter().map(|c| c * c).sum();
    // Var ‖u‖² = 2Σ|cₙ|⁴ for Gaussian noise.
    let sd = (2.0 * coeffs.iter().map(|c| c.powi(4)).sum::<f64>()).sqrt();
    let trials = 200;
    let mean: f64 = (0..trials)
        .map(|t| {
            let s = sample_partial_sum(
                &rule,
                RandomLaw::Gaussian,
                lambda,
                1,
                SampleMode::OneD,
                line(lambda, 0.02),
                trial_seed(5, t),
            )
            .unwrap();
            l2_squared(&s)
        })
        .sum::<f64>()
        / trials as f64;
    assert!((mean - mass).abs() < 4.0 * sd / (trials as f64).sqrt(), "{mean} vs {mass}");
}

#[test]
fn radial_fields_keep_coefficient_mass() {
    // ∫_{ℝ²}|u|² = 2π∫|u(ρ)|²ρ dρ.
    let rule = CoefficientRule::power_law(0.5);
    let layout = Layout::Radial { d: 2 };
    let lambda = 120.0;
    let mass: f64 = rule.coefficients(layout, layout.modes_up_to(lambda)).iter().map(|c| c * c).sum();
    let step = 0.005;
    let s = sample_partial_sum(
        &rule,
        RandomLaw::Rademacher,
        lambda,
        2,
        SampleMode::Radial,
        Grid::uniform(0.0, lambda.sqrt() + 8.0, step),
        2,
    )
    .unwrap();
    let Grid::Line(rho) = &s.grid else { unreachable!() };
    // Composite Simpson: u²ρ is odd at 0, so the plain trapezoid is only O(step²).
    let f: Vec<f64> = rho.iter().zip(&s.values).map(|(r, v)| v * v * r).collect();
    let m = (f.len() - 1) / 2 * 2;
    let inner: f64 = (1..m).map(|i| if i % 2 == 1 { 4.0 * f[i] } else { 2.0 * f[i] }).sum();
    let integral = (f[0] + inner + f[m]) * step / 3.0;
    assert!((2.0 * std::f64::consts::PI * integral / mass - 1.0).abs() < 1e-8);
}

#[test]
fn sup_norm_stable_under_grid_refinement() {
    let rule = CoefficientRule::power_law(0.5);
    let lambda = 512.0;
    for seed in [1u64, 2, 3] {
        let coarse = GridDensity::CALIBRATED;
        let fine = GridDensity {
            factor: coarse.factor / 4.0,
            ..coarse
        };
        let sup = |density: GridDensity| {
            let s = sample_partial_sum(
                &rule,
                RandomLaw::Gaussian,
                lambda,
                1,
                SampleMode::OneD,
                Grid::for_lambda(SampleMode::OneD, lambda, density),
                seed,
            )
            .unwrap();
            sup_norm(&s)
        };
        let (a, b) = (sup(coarse), sup(fine));
        assert!(a <= b * (1.0 + 1e-12) && (b - a) / b < 0.01, "{a} {b}");
    }
}

#[test]
fn nested_partial_sums_share_noise() {
    let rule = CoefficientRule::power_law(0.5);
    let grid = line(100.0, 0.05);
    let small = sample_partial_sum(&rule, RandomLaw::Gaussian, 40.0, 1, SampleMode::OneD, grid.clone(), 4).unwrap();
    let big = sample_partial_sum(&rule, RandomLaw::Gaussian, 100.0, 1, SampleMode::OneD, grid.clone(), 4).unwrap();
    // The tail λ ∈ (40, 100] alone, with the same noise entries.
    let layout = Layout::Tensor { d: 1 };
    let (lo, hi) = (layout.modes_up_to(40.0) as usize, layout.modes_up_to(100.0) as usize);
    let mut tail = vec![0.0; hi];
    for n in lo..hi {
        tail[n] = rule.coefficient(layout, n as u64);
    }
    let tail = sample_partial_sum(
        &CoefficientRule::Explicit(tail),
        RandomLaw::Gaussian,
        100.0,
        1,
        SampleMode::OneD,
        grid,
        4,
    )
    .unwrap();
    for i in 0..big.values.len() {
        assert!((small.values[i] + tail.values[i] - big.values[i]).abs() < 1e-12);
    }
}

#[test]
fn single_mode_gradient_ratio_grows_like_cube_root() {
    // ‖𝔥ₙ′‖_∞/‖𝔥ₙ‖_∞ ~ λ^{1/3}: both sups sit near the turning point.
    let fit = bernstein_single_mode(&[10, 20, 50, 100, 200, 500, 1000]).unwrap();
    assert!((fit.slope - 1.0 / 3.0).abs() < 0.05, "{}", fit.slope);
}

#[test]
fn bernstein_probe_is_reproducible() {
    let a = bernstein_probe(1, &[16.0, 32.0, 64.0, 128.0, 256.0], 4, 9).unwrap();
    let b = bernstein_probe(1, &[16.0, 32.0, 64.0, 128.0, 256.0], 4, 9).unwrap();
    assert_eq!(a, b);
    assert!(a.slope > 0.3 && a.slope < 0.8);
}

#[test]
fn salem_zygmund_small_run() {
    let rule = CoefficientRule::BucketConstant(BucketLaw::power(1.0, 1.0 / 6.0 - 1.5));
    let lambdas = [32.0, 64.0, 128.0];
    let r = salem_zygmund_experiment(
        &rule,
        RandomLaw::Rademacher,
        1,
        SampleMode::OneD,
        &lambdas,
        32,
        3,
        GridDensity::CALIBRATED,
    )
    .unwrap();
    for (k, &l) in lambdas.iter().enumerate() {
        assert!(r.rho[k] <= r.rho_full[k]);
        assert_eq!(r.rho[k], rho(&rule, Layout::Tensor { d: 1 }, (l / 2.0) as u64));
        // Nested sums share noise, so each trial's sup is a genuine sequence in λ.
        assert_eq!(r.sups[k].len(), 32);
    }
    assert!(r.spread(2).is_finite() && r.spread(2) >= 1.0);
    // One sample recomputed directly.
    let s = sample_partial_sum(
        &rule,
        RandomLaw::Rademacher,
        64.0,
        1,
        SampleMode::OneD,
        Grid::for_lambda(SampleMode::OneD, 128.0, GridDensity::CALIBRATED),
        trial_seed(3, 5),
    )
    .unwrap();
    assert_eq!(sup_norm(&s).to_bits(), r.sups[1][5].to_bits());
}

#[test]
fn dyadic_blocks_sum_to_field() {
    let rule = CoefficientRule::BucketConstant(BucketLaw::Power {
        scale: 1.0,
        j_power: -5.0 / 6.0,
        log_power: -4.0,
        log_shift: 1.0,
    });
    let blocks = dyadic_block_sups(
        &rule,
        RandomLaw::Rademacher,
        1,
        SampleMode::OneD,
        256.0,
        &[1, 2],
        GridDensity::CALIBRATED,
    )
    .unwrap();
    let full: Vec<f64> = [1u64, 2]
        .iter()
        .map(|&seed| {
            let s = sample_partial_sum(
                &rule,
                RandomLaw::Rademacher,
                256.0,
                1,
                SampleMode::OneD,
                Grid::for_lambda(SampleMode::OneD, 256.0, GridDensity::CALIBRATED),
                seed,
            )
            .unwrap();
            sup_norm(&s)
        })
        .collect();
    for (b, sup) in blocks.iter().zip(full) {
        // Triangle inequality: ‖u‖_∞ ≤ Σ_K ‖u_K‖_∞.
        assert!(sup <= b.partial_sums().last().unwrap() * (1.0 + 1e-12));
        assert!(b.final_fraction() > 0.0 && b.final_fraction() < 1.0);
        assert_eq!(b.sups.len(), dyadic_block_ranges(Layout::Tensor { d: 1 }, 256.0).len());
    }
}

#[test]
fn lipschitz_case_has_unit_slope() {
    let rule = modulus_rule(1, 1.0, -2.0).unwrap();
    let hs: Vec<f64> = (4..=12).rev().map(|k| 2f64.powi(-k)).collect();
    let fits = modulus_sweep(&rule, RandomLaw::Rademacher, 1, SampleMode::OneD, 1024.0, &[1, 2, 3], &hs, 1.0).unwrap();
    for f in fits {
        assert!(f.fit.unwrap().slope >= 0.95);
    }
}

#[test]
fn zero_rule_modulus_is_degenerate() {
    let hs = [0.01, 0.02, 0.04, 0.08, 0.16];
    let fits = modulus_sweep(
        &CoefficientRule::Explicit(vec![0.0; 10]),
        RandomLaw::Gaussian,
        1,
        SampleMode::OneD,
        64.0,
        &[4],
        &hs,
        0.5,
    )
    .unwrap();
    assert!(fits[0].fit.is_none() && fits[0].modulus.iter().all(|m| m.1 == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linearity_in_the_rule(a in proptest::collection::vec(-1.0f64..1.0, 1..40), b in proptest::collection::vec(-1.0f64..1.0, 1..40), seed in 0u64..1000) {
        let n = a.len().max(b.len());
        let sum: Vec<f64> = (0..n).map(|i| a.get(i).unwrap_or(&0.0) + b.get(i).unwrap_or(&0.0)).collect();
        let grid = line(90.0, 0.1);
        let go = |c: Vec<f64>| sample_partial_sum(&CoefficientRule::Explicit(c), RandomLaw::Gaussian, 90.0, 1, SampleMode::OneD, grid.clone(), seed).unwrap().values;
        let (ua, ub, us) = (go(a), go(b), go(sum));
        for i in 0..us.len() {
            prop_assert!((ua[i] + ub[i] - us[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn modulus_is_subadditive(kappa in 0.2f64..1.5, seed in 0u64..1000, k in 3i32..8) {
        // h is a multiple of the spacing, so windows of width 2h split into two of width h sharing a point.
        let s = sample_partial_sum(&CoefficientRule::power_law(kappa), RandomLaw::Rademacher, 200.0, 1, SampleMode::OneD, line(200.0, 2f64.powi(-10)), seed).unwrap();
        let h = 2f64.powi(-k);
        let m = modulus_of_continuity(&s, &[h, 2.0 * h]).unwrap();
        prop_assert!(m[1] <= 2.0 * m[0] * (1.0 + 1e-12));
        prop_assert!(m[0] <= m[1]);
    }

    #[test]
    fn noise_depends_only_on_seed_and_index(seed in any::<u64>(), n in 0u64..10_000) {
        for law in [RandomLaw::Rademacher, RandomLaw::Gaussian, RandomLaw::BoundedUniform { a: 2.0 }] {
            let v = law.draw(seed, n);
            prop_assert_eq!(v.to_bits(), draw_noise(law, n as usize + 1, seed)[n as usize].to_bits());
        }
    }
}
