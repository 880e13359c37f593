use gsemo_core::rng::rng_from_seed;
use gsemo_core::stats::{rank_differences, signed_rank_with, PValueMethod};
use rand::Rng;

/// Two-sided p by walking all 2^m sign assignments of the ranks.
fn enumerate_p(diffs: &[f64]) -> f64 {
    let ranked = rank_differences(diffs);
    let ranks: Vec<f64> = ranked.doubled_ranks.iter().map(|&r| r as f64 / 2.0).collect();
    let observed = ranked.doubled_w_plus() as f64 / 2.0;
    let m = ranks.len();
    let (mut ge, mut le) = (0u64, 0u64);
    for signs in 0..1u64 << m {
        let w: f64 = (0..m).filter(|i| signs >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w >= observed - 1e-9 {
            ge += 1;
        }
        if w <= observed + 1e-9 {
            le += 1;
        }
    }
    (2.0 * ge.min(le) as f64 / (1u64 << m) as f64).min(1.0)
}

fn random_diffs(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let shift = rng.random_range(-1.0..1.0);
    (0..m)
        .map(|_| {
            // rounding produces ties on purpose
            let z: f64 = rng.random_range(-2.0..2.0) + shift;
            (z * 4.0).round() / 4.0
        })
        .collect()
}

#[test]
fn exact_path_matches_enumeration() {
    let mut rng = rng_from_seed(99);
    for _ in 0..300 {
        let m = rng.random_range(5..=12);
        let diffs = random_diffs(&mut rng, m);
        let Ok(t) = signed_rank_with(&diffs, PValueMethod::Exact) else { continue };
        assert!((t.p_value - enumerate_p(&diffs)).abs() < 1e-12, "{diffs:?}");
    }
    let t = signed_rank_with(&[1.0, 2.0, 3.0, 4.0, 5.0], PValueMethod::Exact).unwrap();
    assert_eq!(t.p_value, 2.0 / 32.0);
}

#[test]
fn normal_approximation_agrees_with_exact_at_twelve() {
    let mut rng = rng_from_seed(12);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let diffs: Vec<f64> = (0..12)
            .map(|_| rng.random_range(-1.0..1.0) + rng.random_range(-0.6..0.6))
            .collect();
        let exact = signed_rank_with(&diffs, PValueMethod::Exact).unwrap();
        let approx = signed_rank_with(&diffs, PValueMethod::Edgeworth).unwrap();
        let plain = signed_rank_with(&diffs, PValueMethod::Normal).unwrap();
        worst = worst.max((exact.p_value - approx.p_value).abs());
        // the uncorrected approximation is off by up to ~0.014 at m = 12
        assert!((exact.p_value - plain.p_value).abs() < 0.015);
    }
    assert!(worst < 0.01, "worst disagreement {worst}");
}

#[test]
fn large_samples_use_the_approximation() {
    let diffs: Vec<f64> = (1..=30).map(|i| if i % 4 == 0 { -(i as f64) } else { i as f64 }).collect();
    let t = gsemo_core::stats::signed_rank(&diffs).unwrap();
    assert_eq!(t.method, PValueMethod::Edgeworth);
    assert_eq!(t.nonzero, 30);
    assert!(t.p_value < 0.05 && t.direction() == std::cmp::Ordering::Greater);
}
