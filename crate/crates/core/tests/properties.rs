use mff::partition_spectrum::{spectrum_domain, spectrum_point, tau_n, theta};
use mff::projection::{gray_decode, gray_encode, interval_containing, interval_of_word, word_of_index};
use mff::symbolic_space::common_prefix_len;
use mff::{tilt_q, Alphabet, DigitMeasure, EpochSchedule, IsometryCode, ModelParams, SchedulePreset, Word};
use proptest::prelude::*;

fn weights(c: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, c).prop_map(|raw| {
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect()
    })
}

fn params() -> impl Strategy<Value = ModelParams> {
    (2usize..=4, 2usize..=4)
        .prop_flat_map(|(c1, c2)| (weights(c1), weights(c2)))
        .prop_map(|(a, b)| ModelParams::new(a, b).unwrap())
}

fn preset() -> impl Strategy<Value = SchedulePreset> {
    prop_oneof![
        Just(SchedulePreset::Squares),
        Just(SchedulePreset::Factorial),
        (2u64..5).prop_map(|ratio| SchedulePreset::Geometric { ratio }),
    ]
}

fn lse(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

proptest! {
    #[test]
    fn tau_is_pinched_between_the_limits(p in params(), preset in preset(), n in 1usize..5000, q in -4.0f64..4.0) {
        let s = EpochSchedule::new(preset, p.c1(), p.c2(), 5000).unwrap();
        let t = tau_n(&p, &s, n, q).unwrap();
        let (ta, tb) = (theta(&p, Alphabet::A1, q), theta(&p, Alphabet::A2, q));
        prop_assert!(t >= ta.min(tb) - 1e-12 && t <= ta.max(tb) + 1e-12);
        prop_assert!(tau_n(&p, &s, n, 1.0).unwrap().abs() <= 1e-12);
        prop_assert!(tau_n(&p, &s, n, q + 0.5).unwrap() <= t + 1e-12);
    }

    #[test]
    fn tilted_weights_are_normalized(p in params(), q in -6.0f64..6.0) {
        let t = tilt_q(&p, q).unwrap();
        prop_assert!((t.a.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!((t.b.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cylinder_mass_splits_over_children(p in params(), preset in preset(), seed in any::<u64>(), n in 0usize..30) {
        let s = EpochSchedule::new(preset, p.c1(), p.c2(), 64).unwrap();
        let mu = DigitMeasure::base(&p, &s).unwrap();
        let w = mu.sample(n, seed).unwrap();
        let children: Vec<f64> = (0..s.size_at(n + 1).unwrap())
            .map(|d| {
                let mut c = w.clone();
                c.push(d);
                mu.log_mass(&c).unwrap()
            })
            .collect();
        prop_assert!((lse(&children) - mu.log_mass(&w).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn index_round_trip_and_containment(p in params(), preset in preset(), n in 1usize..20, x in 0.0f64..1.0) {
        let s = EpochSchedule::new(preset, p.c1(), p.c2(), 64).unwrap();
        let i = interval_containing(&s, x, n).unwrap();
        let (l, r) = (i.left(&s).unwrap(), i.right(&s).unwrap());
        prop_assert!(l < x + 1e-12 && x <= r + 1e-12);
        let idx = i.index(&s).unwrap().unwrap();
        prop_assert_eq!(word_of_index(&s, n, idx).unwrap(), i.word().clone());
        prop_assert_eq!(interval_of_word(&s, i.word()).unwrap(), i);
    }

    #[test]
    fn gray_code_is_an_invertible_prefix_isometry(x in prop::collection::vec(0u32..2, 0..64), y in prop::collection::vec(0u32..2, 0..64)) {
        let (x, y) = (Word::new(x), Word::new(y));
        prop_assert_eq!(gray_decode(&gray_encode(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(common_prefix_len(&gray_encode(&x).unwrap(), &gray_encode(&y).unwrap()), common_prefix_len(&x, &y));
    }

    #[test]
    fn permutations_invert(perm_a in Just(vec![0u32, 1, 2]).prop_shuffle(), perm_b in Just(vec![0u32, 1]).prop_shuffle(), seed in any::<u64>()) {
        let s = EpochSchedule::squares(3, 2);
        let code = IsometryCode::DigitPermutation { a: perm_a, b: perm_b };
        code.validate(&s).unwrap();
        let p = ModelParams::new(vec![0.2, 0.3, 0.5], vec![0.5, 0.5]).unwrap();
        let w = DigitMeasure::base(&p, &s).unwrap().sample(40, seed).unwrap();
        prop_assert_eq!(code.preimage(&s, &code.apply(&s, &w).unwrap()).unwrap(), w);
    }

    #[test]
    fn dimensions_are_bounded_by_the_exponent(p in params(), t in 0.01f64..0.99) {
        let dom = spectrum_domain(&p);
        prop_assume!(!dom.is_empty() && dom.hi - dom.lo > 1e-6);
        let alpha = dom.lo + t * (dom.hi - dom.lo);
        let sp = spectrum_point(&p, alpha).unwrap();
        prop_assert!(sp.hausdorff_dim <= sp.packing_dim + 1e-12);
        prop_assert!(sp.packing_dim <= alpha.min(1.0) + 1e-9);
        prop_assert!(sp.hausdorff_dim >= -1e-12);
    }
}
