use hermite_series::special_fn::hermite_batch;
use hermite_series::spectral::*;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Number of α ∈ ℕ^d with |α| = m, by direct enumeration.
fn count_compositions(m: usize, d: usize) -> u64 {
    if d == 1 {
        return 1;
    }
    (0..=m).map(|first| count_compositions(m - first, d - 1)).sum()
}

#[test]
fn bucket_counts_match_enumeration() {
    for d in 1..=5usize {
        let layout = SpectralLayout::new(d).unwrap();
        for m in 0..=30u64 {
            let eigenvalue = 2 * m + d as u64;
            let j = eigenvalue / 2;
            let members = bucket_members(j, d);
            assert_eq!(members.len() as u64, count_compositions(m as usize, d), "d={d} m={m}");
            assert_eq!(members.len() as u64, binomial(m + d as u64 - 1, d as u64 - 1));
            assert_eq!(layout.bucket_size(j), members.len() as u64);
            for a in &members {
                let lambda = 2 * a.iter().sum::<usize>() + d;
                assert!(2 * j as usize <= lambda && lambda < 2 * j as usize + 2);
            }
        }
    }
}

#[test]
fn bucket_examples() {
    assert_eq!(bucket_of(0, 1), 0);
    assert_eq!(bucket_of(5, 1), 5);
    assert_eq!(bucket_members(4, 2).len(), 4);
    assert_eq!(bucket_members(2, 4).len(), 1);
    assert!(bucket_members(1, 4).is_empty());
    // Eigenvalue 2·3 + 2 = 8 in d = 2 sits in bucket 4.
    let l = Layout::Tensor { d: 2 };
    let first_m3 = l.spectral().modes_below_level(3);
    assert_eq!(l.bucket_of(first_m3), 4);
    assert_eq!(l.eigenvalue(first_m3), 8.0);
}

#[test]
fn layout_constants() {
    for d in 1..=8usize {
        let s = SpectralLayout::new(d).unwrap();
        assert_eq!(s.beta + s.gamma, d as f64 - 1.0);
    }
    assert_eq!(SpectralLayout::new(1).unwrap().gamma, -1.0 / 6.0);
    assert_eq!(SpectralLayout::new(3).unwrap().beta, 1.5);
}

#[test]
fn spectral_function_examples() {
    let v = spectral_function(1, 2, &[0.0, 0.0]).unwrap();
    assert!((v - 1.0 / PI).abs() < 1e-15);
    for (j, x) in [(7u64, 0.4), (30, -2.5)] {
        let h = hermite_batch(x, j as usize).values[j as usize];
        assert!((spectral_function(j, 1, &[x]).unwrap() - h * h).abs() < 1e-15);
    }
    let r = (0.18f64).sqrt();
    let a = spectral_function(6, 2, &[0.3, 0.3]).unwrap();
    let b = spectral_function(6, 2, &[r, 0.0]).unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn karadzhov_ratio_bounded_short_sweeps() {
    let r: Vec<f64> = [5u64, 10, 20, 40].iter().map(|&j| karadzhov_ratio(j, 2).unwrap()).collect();
    let hi = r.iter().cloned().fold(0.0, f64::max);
    let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo < 5.0, "{r:?}");
}

#[test]
#[ignore = "j = 10^4 sweep takes minutes"]
fn karadzhov_one_dimensional_large_j() {
    let a = karadzhov_ratio(1000, 1).unwrap();
    let b = karadzhov_ratio(10_000, 1).unwrap();
    assert!((b / a - 1.0).abs() < 0.05, "{a} {b}");
}

#[test]
fn zs_norm_harmonic_growth() {
    let s = 0.5;
    let d = 2usize;
    let rule = CoefficientRule::BucketConstant(BucketLaw::power(1.0, -(s + d as f64)));
    let l = Layout::Tensor { d };
    let j_max = 5000u64;
    let harmonic: f64 = (1..=j_max).map(|j| 1.0 / j as f64).sum();
    let z = zs_norm(&rule, s, l, j_max);
    assert!((z * z / harmonic - 1.0).abs() < 1e-12);
}

#[test]
fn condi5_partial_sums_match_direct_sums() {
    let l = Layout::Tensor { d: 1 };
    for (kappa, p, holds) in [(0.75, 4.0, true), (0.4, 2.0, false)] {
        let rule = CoefficientRule::PowerLaw { kappa, c0: 1.0 };
        let r = check_condition(&rule, Condition::Condi5 { p }, l, 20_000);
        assert_eq!(r.holds, holds, "kappa={kappa} p={p}");
        let e = -1.0 / 6.0 + 1.0 / (3.0 * p) - 2.0 * kappa;
        for &(j, s) in &r.partial_sums {
            let direct: f64 = (1..=j).map(|k| (k as f64).powf(e)).sum();
            assert!((s / direct - 1.0).abs() < 1e-12, "j={j}");
        }
    }
}

#[test]
fn cond_with_log_weight_saturation() {
    // |c|² = j^{−1−γ}·ln(j+1)^{−4}: summable against (ln j)² but not (ln j)^{3.5}.
    let rule = CoefficientRule::BucketConstant(BucketLaw::Power {
        scale: 1.0,
        j_power: -5.0 / 6.0,
        log_power: -4.0,
        log_shift: 1.0,
    });
    let l = Layout::Tensor { d: 1 };
    assert!(check_condition(&rule, Condition::Cond { alpha: 2.0 }, l, 100_000).holds);
    assert!(!check_condition(&rule, Condition::Cond { alpha: 3.5 }, l, 100_000).holds);
}

#[test]
fn dyadic_law_meets_condh_with_equality() {
    for (mu, nu) in [(0.5, 0.0), (0.25, 0.0), (1.0, -2.0)] {
        let rule = hermite_series::random_series::modulus_rule(1, mu, nu).unwrap();
        let r = check_condition(&rule, Condition::Condh { mu, nu }, Layout::Tensor { d: 1 }, 1 << 14);
        assert!(r.holds);
        assert!(r.constant >= 1.0 && r.constant < 2.0, "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_function_permutation_invariant(j in 2u64..14, x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0) {
        let a = spectral_function(j, 3, &[x, y, z]).unwrap();
        for p in [[y, z, x], [z, x, y], [x, z, y]] {
            let b = spectral_function(j, 3, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn spectral_partial_sums_nondecreasing(x in -4.0f64..4.0, y in -4.0f64..4.0) {
        let mut acc = 0.0;
        for j in 1..=20u64 {
            let next = acc + spectral_function(j, 2, &[x, y]).unwrap();
            prop_assert!(next >= acc);
            acc = next;
        }
    }

    #[test]
    fn zs_bucket_constant_matches_direct_sum(s in -1.0f64..2.0, power in -4.0f64..-1.0, d in 1usize..=4) {
        let law = BucketLaw::power(1.0, power);
        let rule = CoefficientRule::BucketConstant(law);
        let l = Layout::Tensor { d };
        let j_max = 300u64;
        // I(j) is non-empty exactly when j ≥ ⌊d/2⌋.
        let direct: f64 = (1..=j_max)
            .filter(|&j| j >= d as u64 / 2)
            .map(|j| (j as f64).powf(s + d as f64 - 1.0) * law.value_sq(j))
            .sum();
        let z = zs_norm(&rule, s, l, j_max);
        prop_assert!((z * z / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hs_norm_monotone_in_truncation(kappa in 0.0f64..2.0, s in -1.0f64..1.0, n in 1u64..500) {
        let rule = CoefficientRule::power_law(kappa);
        let l = Layout::Tensor { d: 2 };
        prop_assert!(hs_norm(&rule, s, l, n) <= hs_norm(&rule, s, l, n + 1));
    }

    #[test]
    fn norm_sandwich_on_finite_rules(values in proptest::collection::vec(-1.0f64..1.0, 1..120), s in 0.0f64..2.0) {
        // d = 2: #I(j) = j and λ = 2j, so ‖c‖²_{𝓗ˢ} ≤ 2^s‖c‖²_{𝒵ˢ} and ‖c‖²_{𝒵ˢ} ≤ ‖c‖²_{𝓗^{s+1}}.
        let rule = CoefficientRule::Explicit(values.clone());
        let l = Layout::Tensor { d: 2 };
        let n_max = values.len() as u64;
        let j_max = l.bucket_of(n_max) + 1;
        let h = hs_norm(&rule, s, l, n_max);
        let z = zs_norm(&rule, s, l, j_max);
        let h_up = hs_norm(&rule, s + 1.0, l, n_max);
        prop_assert!(h * h <= 2f64.powf(s) * z * z * (1.0 + 1e-12) + 1e-300);
        prop_assert!(z * z <= h_up * h_up * (1.0 + 1e-12) + 1e-300);
    }
}
