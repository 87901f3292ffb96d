//! Fast in-binary versions of the library's invariants, for `mqlab --mode selftest`.

use rand::Rng;

use crate::estimation::{
    classify_window, estimate_bias_doubling, BiasConfig, BiasVerdict, Side, Window, WindowVerdict,
};
use crate::geometry::{
    chow_vector, komatsu_bounds, localize_halfspace, normal_cdf, smoothed_halfspace,
    threshold_for_bias, Halfspace, UnitVector,
};
use crate::initialization::localized_point;
use crate::learner::{tournament, Hypothesis, TournamentConfig};
use crate::lowerbound::{
    isometry_ratio, negative_capture_prob, play_query_game, Pool, QueryStrategy,
};
use crate::oracles::{LabelSource, MembershipOracle};
use crate::refinement::{refine_round, RefineConfig, RefineState};
use crate::rng::{self, keys, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&mut StreamRng) -> (bool, String);

const CHECKS: [(&str, Check); 12] = [
    ("localized_transform_exact", localized_transform),
    ("smoothed_transform_exact", smoothed_transform),
    ("komatsu_sandwich", komatsu),
    ("chow_monte_carlo", chow),
    ("window_verdict_monotone", window_monotone),
    ("ledger_exact_and_budget_refusal", ledger),
    ("bias_doubling_bracket", bias_bracket),
    ("refine_sigma_geometric", sigma_geometric),
    ("tournament_prefers_better", tournament_check),
    ("isometry_invariances", isometry_invariances),
    ("capture_monotone_in_threshold", capture_monotone),
    ("query_game_budget", game_budget),
];

/// Runs every check on its own stream of `seed`.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut r = rng::stream(seed ^ ((i as u64 + 1) << 32), keys::SELFTEST);
            let (passed, detail) = check(&mut r);
            CheckResult {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn random_halfspace(d: usize, r: &mut StreamRng) -> Halfspace {
    let w = UnitVector::new(rng::gaussian_vector(d, r)).expect("nonzero Gaussian");
    Halfspace::new(w, r.random_range(-3.0..3.0))
}

fn localized_transform(r: &mut StreamRng) -> (bool, String) {
    let mut bad = 0;
    for _ in 0..2000 {
        let h = random_halfspace(6, r);
        let v = UnitVector::new(rng::gaussian_vector(6, r)).unwrap();
        let (s, sigma) = (r.random_range(-2.0..2.0), r.random_range(0.05..0.95));
        let z = rng::gaussian_vector(6, r);
        let x = localized_point(&v, s, sigma, &z);
        let lh = localize_halfspace(&h, &v, s, sigma).unwrap();
        if h.margin(&x).abs() > 1e-9 && h.eval(&x) != lh.eval(&z) {
            bad += 1;
        }
    }
    (bad == 0, format!("{bad} disagreements"))
}

fn smoothed_transform(r: &mut StreamRng) -> (bool, String) {
    let mut bad = 0;
    for _ in 0..2000 {
        let h = random_halfspace(6, r);
        let x0 = rng::gaussian_vector(6, r);
        let rho: f64 = r.random_range(0.05..1.0);
        let z = rng::gaussian_vector(6, r);
        let x = &x0 * (1.0 - rho * rho).sqrt() + &z * rho;
        let sh = smoothed_halfspace(&h, &x0, rho).unwrap();
        if h.margin(&x).abs() > 1e-9 && h.eval(&x) != sh.eval(&z) {
            bad += 1;
        }
    }
    (bad == 0, format!("{bad} disagreements"))
}

fn komatsu(_: &mut StreamRng) -> (bool, String) {
    let bad = (0..100)
        .filter(|i| {
            let t = 6.0 * *i as f64 / 99.0;
            let (lo, hi) = komatsu_bounds(t).unwrap();
            let tail = normal_cdf(-t);
            !(lo < tail && tail < hi)
        })
        .count();
    (bad == 0, format!("{bad} violations"))
}

fn chow(r: &mut StreamRng) -> (bool, String) {
    let d = 5;
    let h = random_halfspace(d, r);
    let m = 40_000;
    let mut acc = rng::gaussian_vector(d, r) * 0.0;
    for _ in 0..m {
        let x = rng::gaussian_vector(d, r);
        acc += &x * h.eval(&x).sign();
    }
    acc /= m as f64;
    let gap = (acc - chow_vector(&h)).norm();
    let tol = 4.0 * (d as f64 / m as f64).sqrt();
    (gap <= tol, format!("gap {gap:.4} tolerance {tol:.4}"))
}

fn window_monotone(_: &mut StreamRng) -> (bool, String) {
    let w = Window::new(0.2, 0.6).unwrap();
    let rank = |v: WindowVerdict| match v {
        WindowVerdict::Outside(Side::Low) => 0,
        WindowVerdict::Inconclusive(Side::Low) => 1,
        WindowVerdict::InWindow => 2,
        WindowVerdict::Inconclusive(Side::High) => 3,
        WindowVerdict::Outside(Side::High) => 4,
    };
    let ranks: Vec<i32> = (0..=200)
        .map(|i| rank(classify_window(i as f64 / 200.0, w)))
        .collect();
    let ok = ranks.windows(2).all(|p| p[0] <= p[1]);
    (
        ok,
        format!(
            "{} verdict changes",
            ranks.windows(2).filter(|p| p[0] != p[1]).count()
        ),
    )
}

fn ledger(r: &mut StreamRng) -> (bool, String) {
    let h = random_halfspace(4, r);
    let mut o = MembershipOracle::new(LabelSource::Clean(h), 1).with_budget(50);
    let mut refused = 0;
    for _ in 0..60 {
        let x = rng::gaussian_vector(4, r);
        if o.query(&x).is_err() {
            refused += 1;
        }
    }
    (
        o.ledger() == 50 && refused == 10,
        format!("ledger {} refused {refused}", o.ledger()),
    )
}

fn bias_bracket(r: &mut StreamRng) -> (bool, String) {
    let p = 0.2;
    let h = Halfspace::new(UnitVector::basis(3, 0), threshold_for_bias(p).unwrap());
    let mut hits = 0;
    for i in 0..10 {
        let mut o = MembershipOracle::new(LabelSource::Clean(h.clone()), i);
        let est = estimate_bias_doubling(&mut o, 0.01, 0.05, &BiasConfig::default(), r).unwrap();
        if let BiasVerdict::Bracket { p_hat } = est.verdict {
            if p_hat <= p && p <= 4.0 * p_hat {
                hits += 1;
            }
        }
    }
    (hits >= 9, format!("{hits}/10 brackets"))
}

fn sigma_geometric(r: &mut StreamRng) -> (bool, String) {
    let h = Halfspace::new(UnitVector::basis(4, 0), 1.0);
    let mut o = MembershipOracle::new(LabelSource::Clean(h.clone()), 2);
    let cfg = RefineConfig::default();
    let mut s = RefineState::new(h.w.clone(), 0.5, 0);
    let mut ok = true;
    for _ in 0..3 {
        let rec = refine_round(&mut o, &s, 1.0, &cfg, 500, 0.01, r).unwrap();
        ok &= (rec.after.sigma - rec.before.sigma * (1.0 - 1.0 / cfg.c2)).abs() < 1e-15;
        s = rec.after;
    }
    (ok, format!("sigma after 3 rounds {:.6}", s.sigma))
}

fn tournament_check(r: &mut StreamRng) -> (bool, String) {
    let h = Halfspace::new(UnitVector::basis(3, 0), 0.5);
    let good = Hypothesis::Halfspace(h.clone());
    let bad = Hypothesis::Halfspace(Halfspace::new(UnitVector::basis(3, 1), 0.5));
    let mut o = MembershipOracle::new(LabelSource::Clean(h), 3);
    let out = tournament(
        &[bad, good],
        &mut o,
        0.05,
        0.05,
        &TournamentConfig::default(),
        r,
    )
    .unwrap();
    (out.winner == 1, format!("winner {}", out.winner))
}

fn isometry_invariances(r: &mut StreamRng) -> (bool, String) {
    let rows: Vec<_> = (0..5).map(|_| rng::gaussian_vector(50, r)).collect();
    let refs: Vec<_> = rows.iter().collect();
    let base = isometry_ratio(&refs).unwrap();
    let mut permuted = refs.clone();
    permuted.reverse();
    let flipped: Vec<_> = rows
        .iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 0 { -x } else { x.clone() })
        .collect();
    let flipped_refs: Vec<_> = flipped.iter().collect();
    let a = isometry_ratio(&permuted).unwrap();
    let b = isometry_ratio(&flipped_refs).unwrap();
    let ok = (a - base).abs() < 1e-9 && (b - base).abs() < 1e-9;
    (ok, format!("base {base:.6}"))
}

fn capture_monotone(r: &mut StreamRng) -> (bool, String) {
    let x = rng::gaussian_vector(30, r);
    let rows = [x];
    let est: Vec<_> = [0.0, 0.5, 1.0, 1.5]
        .iter()
        .map(|&t| negative_capture_prob(&rows, t, 20_000, r).unwrap())
        .collect();
    let ok = est
        .windows(2)
        .all(|p| p[1].probability <= p[0].probability + 3.0 * (p[0].se.hypot(p[1].se)));
    let probs: Vec<String> = est
        .iter()
        .map(|e| format!("{:.4}", e.probability))
        .collect();
    (ok, probs.join(" "))
}

fn game_budget(r: &mut StreamRng) -> (bool, String) {
    let mut pool = Pool::random(10, 300, 2.5, r).unwrap();
    let mut ok = true;
    for s in [
        QueryStrategy::RandomOrder,
        QueryStrategy::GreedyDirection,
        QueryStrategy::OracleAided,
    ] {
        let out = play_query_game(&mut pool, s, 20, 40, r).unwrap();
        let mut h = pool.history().to_vec();
        h.sort_unstable();
        h.dedup();
        ok &= out.queries_used <= 40 && h.len() == out.queries_used;
    }
    (ok, "three strategies".to_string())
}
