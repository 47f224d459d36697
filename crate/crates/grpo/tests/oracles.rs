//! Group arithmetic checked against independent brute-force formulas.

use molreward_grpo::*;
use proptest::prelude::*;

/// Population variance via the pairwise-difference identity.
fn pairwise_std(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mut s = 0.0;
    for a in x {
        for b in x {
            s += (a - b) * (a - b);
        }
    }
    (s / (2.0 * n * n)).sqrt()
}

fn oracle_advantages(x: &[f64]) -> Option<Vec<f64>> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let std = pairwise_std(x);
    (std >= STD_FLOOR).then(|| x.iter().map(|v| (v - mean) / std).collect())
}

/// Clip term by cases on the advantage sign.
fn oracle_clip(ratio: f64, a: f64, eps: f64) -> f64 {
    if a >= 0.0 {
        a * ratio.min(1.0 + eps)
    } else {
        a * ratio.max(1.0 - eps)
    }
}

fn oracle_objective(adv: &[f64], probs: &[TokenProbs], eps: f64, beta: f64) -> f64 {
    let mut total = 0.0;
    for (i, c) in probs.iter().enumerate() {
        let mut s = 0.0;
        for t in 0..c.theta.len() {
            let log_ratio = c.reference[t].ln() - c.theta[t].ln();
            let kl = log_ratio.exp() - log_ratio - 1.0;
            s += oracle_clip(c.theta[t] / c.old[t], adv[i], eps) - beta * kl;
        }
        total += s / c.theta.len() as f64;
    }
    total
}

fn rewards() -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![
        prop::collection::vec(0.0f64..2.0, 2..=16),
        prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]), 2..=16),
    ]
}

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<TokenProbs>, f64, f64)> {
    (2usize..=4, 1usize..=6).prop_flat_map(|(g, max_len)| {
        let completion = (1..=max_len).prop_flat_map(|len| {
            (
                prop::collection::vec(0.01f64..1.0, len),
                prop::collection::vec(0.01f64..1.0, len),
                prop::collection::vec(0.01f64..1.0, len),
            )
                .prop_map(|(theta, old, reference)| TokenProbs { theta, old, reference })
        });
        (
            prop::collection::vec(prop::sample::select(vec![0.0, 1.0, 2.0]), g),
            prop::collection::vec(completion, g),
            prop::sample::select(vec![0.1, 0.2, 0.28]),
            prop::sample::select(vec![0.0, 0.005, 0.04, 0.5]),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn advantages_match_oracle(r in rewards()) {
        let g = group_advantages(&r).unwrap();
        match oracle_advantages(&r) {
            None => {
                prop_assert!(g.trivial);
                prop_assert!(g.advantages.iter().all(|&a| a == 0.0));
            }
            Some(expected) => {
                prop_assert!(!g.trivial);
                for (a, e) in g.advantages.iter().zip(&expected) {
                    prop_assert!((a - e).abs() < 1e-12, "{} vs {}", a, e);
                }
                let n = r.len() as f64;
                let mean = g.advantages.iter().sum::<f64>() / n;
                let std = (g.advantages.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n).sqrt();
                prop_assert!(mean.abs() < 1e-9);
                prop_assert!((std - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn advantages_ignore_shift_and_scale(r in rewards(), shift in -5.0f64..5.0, scale in 0.1f64..10.0) {
        let base = group_advantages(&r).unwrap();
        let moved: Vec<f64> = r.iter().map(|x| x * scale + shift).collect();
        let other = group_advantages(&moved).unwrap();
        prop_assert_eq!(base.trivial, other.trivial);
        for (a, b) in base.advantages.iter().zip(&other.advantages) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn clip_identity_at_unit_ratio(a in -10.0f64..10.0, eps in 0.01f64..0.99) {
        prop_assert_eq!(clip_term(1.0, a, eps), a);
    }

    #[test]
    fn clip_matches_case_split(r in 0.01f64..3.0, a in -4.0f64..4.0, eps in 0.01f64..0.99) {
        prop_assert!((clip_term(r, a, eps) - oracle_clip(r, a, eps)).abs() < 1e-12);
    }

    #[test]
    fn kl_is_non_negative(p in 1e-6f64..1.0, q in 1e-6f64..1.0) {
        let k = kl_estimate(p, q).unwrap();
        prop_assert!(k >= 0.0);
        if p == q {
            prop_assert_eq!(k, 0.0);
        } else {
            prop_assert!(k > 0.0 || ((q / p) - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn objective_matches_oracle((r, probs, eps, beta) in instance()) {
        let g = group_advantages(&r).unwrap();
        let got = group_objective(&g, &probs, eps, beta).unwrap();
        let want = oracle_objective(&g.advantages, &probs, eps, beta);
        prop_assert!((got - want).abs() < 1e-10, "{} vs {}", got, want);
    }
}

#[test]
fn objective_examples() {
    let one = |p: f64| TokenProbs { theta: vec![p], old: vec![p], reference: vec![p] };
    let trivial = group_advantages(&[1.0, 1.0, 1.0]).unwrap();
    assert_eq!(group_objective(&trivial, &[one(0.3), one(0.5), one(0.9)], 0.2, 0.1).unwrap(), 0.0);

    let g = group_advantages(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    let same = vec![one(0.4); 4];
    let sum: f64 = g.advantages.iter().sum();
    assert!((group_objective(&g, &same, 0.2, 0.3).unwrap() - sum).abs() < 1e-12);

    // Ratio exactly at the upper clip boundary, and beyond it.
    let g = group_advantages(&[1.0, 0.0]).unwrap();
    let at = |theta: f64| TokenProbs { theta: vec![theta], old: vec![0.5], reference: vec![0.5] };
    let a = g.advantages[0];
    let v = group_objective(&g, &[at(0.6), at(0.5)], 0.2, 0.0).unwrap();
    assert!((v - (1.2 * a + g.advantages[1])).abs() < 1e-12);
    let v = group_objective(&g, &[at(0.9), at(0.5)], 0.2, 0.0).unwrap();
    assert!((v - (1.2 * a + g.advantages[1])).abs() < 1e-12);

    let long = TokenProbs { theta: vec![0.5, 0.5], old: vec![0.5], reference: vec![0.5, 0.5] };
    assert!(matches!(group_objective(&g, &[long, at(0.5)], 0.2, 0.0), Err(GrpoError::Misaligned { .. })));
    assert!(group_objective(&g, &[at(0.5)], 0.2, 0.0).is_err());
    assert!(group_objective(&g, &[at(0.0), at(0.5)], 0.2, 0.0).is_err());
}
