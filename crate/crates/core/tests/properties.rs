use mq_halfspace::estimation::{classify_window, Side, Window, WindowVerdict};
use mq_halfspace::geometry::{
    decompose, halfspace_bias, inv_sqrt_localization_apply, localize_halfspace, smoothed_halfspace,
    sqrt_localization_apply, threshold_for_bias, Halfspace, Point, UnitVector,
};
use mq_halfspace::lowerbound::{isometry_ratio, play_query_game, Pool, QueryStrategy};
use mq_halfspace::oracles::{LabelSource, MembershipOracle};
use mq_halfspace::refinement::RefineConfig;
use mq_halfspace::rng;
use mq_halfspace::scenario::NoiseSpec;
use proptest::prelude::*;

fn vec_strategy(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, d)
}

fn unit(d: usize) -> impl Strategy<Value = UnitVector> {
    vec_strategy(d)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-6)
        .prop_map(|v| UnitVector::from_slice(&v).unwrap())
}

fn rank(v: WindowVerdict) -> u8 {
    match v {
        WindowVerdict::Outside(Side::Low) => 0,
        WindowVerdict::Inconclusive(Side::Low) => 1,
        WindowVerdict::InWindow => 2,
        WindowVerdict::Inconclusive(Side::High) => 3,
        WindowVerdict::Outside(Side::High) => 4,
    }
}

proptest! {
    #[test]
    fn window_verdict_is_monotone(lo in 0.01..0.5f64, width in 0.05..0.45f64, p in 0.0..1.0f64, q in 0.0..1.0f64) {
        let w = Window::new(lo, lo + width).unwrap();
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        prop_assert!(rank(classify_window(p, w)) <= rank(classify_window(q, w)));
    }

    #[test]
    fn localized_halfspace_matches_direct(w in unit(5), v in unit(5), z in vec_strategy(5),
                                          t in -3.0..3.0f64, s in -3.0..3.0f64, sigma in 0.01..0.99f64) {
        let h = Halfspace::new(w, t);
        let z = Point::from_vec(z);
        let x = sqrt_localization_apply(&v, sigma, &z) - v.as_vector() * s;
        prop_assume!(h.margin(&x).abs() > 1e-9);
        prop_assert_eq!(h.eval(&x), localize_halfspace(&h, &v, s, sigma).unwrap().eval(&z));
    }

    #[test]
    fn smoothed_halfspace_matches_direct(w in unit(5), x0 in vec_strategy(5), z in vec_strategy(5),
                                         t in -3.0..3.0f64, rho in 0.01..1.0f64) {
        let h = Halfspace::new(w, t);
        let (x0, z) = (Point::from_vec(x0), Point::from_vec(z));
        let x = &x0 * (1.0 - rho * rho).sqrt() + &z * rho;
        prop_assume!(h.margin(&x).abs() > 1e-9);
        prop_assert_eq!(h.eval(&x), smoothed_halfspace(&h, &x0, rho).unwrap().eval(&z));
    }

    #[test]
    fn localization_maps_are_inverse(v in unit(6), z in vec_strategy(6), sigma in 0.01..0.99f64) {
        let z = Point::from_vec(z);
        let back = inv_sqrt_localization_apply(&v, sigma, &sqrt_localization_apply(&v, sigma, &z));
        prop_assert!((back - &z).norm() <= 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn decomposition_reconstructs(target in unit(4), reference in unit(4)) {
        let dec = decompose(&target, &reference);
        prop_assert!((dec.a * dec.a + dec.b * dec.b - 1.0).abs() < 1e-9);
        prop_assert!((dec.reconstruct(&reference) - target.as_vector()).norm() < 1e-9);
    }

    #[test]
    fn half_angle_is_symmetric(a in unit(4), b in unit(4)) {
        let s = a.sin_half_angle(&b);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s - b.sin_half_angle(&a)).abs() < 1e-15);
    }

    #[test]
    fn threshold_inverts_bias(t in -5.0..5.0f64) {
        let p = halfspace_bias(t).unwrap();
        prop_assert!((threshold_for_bias(p).unwrap() - t).abs() < 1e-8);
    }

    #[test]
    fn sigma_schedule_is_geometric(c2 in 8.5..64.0f64, sigma0 in 0.05..0.5f64, ratio in 1.0..500.0f64) {
        let cfg = RefineConfig { c2, ..RefineConfig::default() };
        let sigma_t = sigma0 / ratio;
        let rounds = cfg.round_count(sigma0, sigma_t);
        let decay = 1.0 - 1.0 / c2;
        prop_assert!(sigma0 * decay.powi(rounds as i32) <= sigma_t * (1.0 + 1e-9));
        if rounds > 1 {
            prop_assert!(sigma0 * decay.powi(rounds as i32 - 1) > sigma_t * (1.0 - 1e-9));
        }
    }

    #[test]
    fn ledger_counts_exactly(n in 0usize..300, budget in 1u64..300, seed in 0u64..1000) {
        let h = Halfspace::new(UnitVector::basis(3, 0), 0.5);
        let mut o = MembershipOracle::new(LabelSource::Clean(h), seed).with_budget(budget);
        let mut r = rng::stream(seed, 0);
        let mut answered = 0u64;
        for _ in 0..n {
            if o.query(&rng::gaussian_vector(3, &mut r)).is_ok() {
                answered += 1;
            }
        }
        prop_assert_eq!(o.ledger(), answered);
        prop_assert_eq!(answered, (n as u64).min(budget));
    }

    #[test]
    fn isometry_ratio_ignores_order_and_signs(seed in 0u64..500, k in 1usize..6, flips in prop::collection::vec(any::<bool>(), 6)) {
        let mut r = rng::stream(seed, 1);
        let rows: Vec<Point> = (0..k).map(|_| rng::gaussian_vector(30, &mut r)).collect();
        let base = isometry_ratio(&rows.iter().collect::<Vec<_>>()).unwrap();
        let changed: Vec<Point> = rows.iter().rev().zip(&flips).map(|(x, &f)| if f { -x } else { x.clone() }).collect();
        let other = isometry_ratio(&changed.iter().collect::<Vec<_>>()).unwrap();
        prop_assert!((base - other).abs() < 1e-9);
    }

    #[test]
    fn query_game_stays_in_budget(seed in 0u64..500, budget in 1usize..80, k in 1usize..10, which in 0usize..3) {
        let strategy = [QueryStrategy::RandomOrder, QueryStrategy::GreedyDirection, QueryStrategy::OracleAided][which];
        let mut r = rng::stream(seed, 2);
        let mut pool = Pool::random(6, 60, 1.5, &mut r).unwrap();
        let out = play_query_game(&mut pool, strategy, k, budget, &mut r).unwrap();
        prop_assert!(out.queries_used <= budget.min(60));
        prop_assert!(out.negatives_found <= k);
        let mut seen = pool.history().to_vec();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), out.queries_used);
    }

    #[test]
    fn noise_spec_round_trips(rate in 0.0..0.49f64, width in 0.0..2.0f64, axis in 0usize..9, lo in -3.0..0.0f64, hi in 0.0..3.0f64) {
        for spec in [NoiseSpec::Rcn(rate), NoiseSpec::Band(width), NoiseSpec::Slab { axis, lo, hi }] {
            prop_assert_eq!(spec.to_string().parse::<NoiseSpec>().unwrap(), spec);
        }
    }
}
