//! Near-isometry, negative capture and the pool query game.

use mq_halfspace::geometry::{normal_cdf, threshold_for_bias};
use mq_halfspace::lowerbound::{
    near_isometry_stat, negative_capture_prob, play_query_game, Pool, QueryStrategy,
};
use mq_halfspace::rng;

fn main() -> mq_halfspace::error::Result<()> {
    let mut r = rng::stream(7, 0);
    for (d, k) in [(200, 1), (200, 10), (2000, 10)] {
        let pool = Pool::random(d, 2000, 2.0, &mut r)?;
        println!(
            "d = {d}, k = {k}: max ‖AAᵀ − dI‖/d over 200 tuples = {:.3}",
            near_isometry_stat(&pool, k, 200, &mut r)?
        );
    }

    let t = 1.5;
    let p = normal_cdf(-t);
    let pool = Pool::random(400, 4, t, &mut r)?;
    for k in 1..=2 {
        let rows: Vec<_> = (0..k).map(|i| pool.point(i).clone()).collect();
        let est = negative_capture_prob(&rows, t, 200_000, &mut r)?;
        println!(
            "capture k = {k}: {:.5} ± {:.5} (p^k = {:.5}, ratio {:.3})",
            est.probability,
            est.se,
            p.powi(k as i32),
            est.normalized_ratio(k, t)
        );
    }

    let t = threshold_for_bias(0.05)?;
    for strategy in [
        QueryStrategy::RandomOrder,
        QueryStrategy::GreedyDirection,
        QueryStrategy::OracleAided,
    ] {
        let mut total = 0;
        for _ in 0..20 {
            let mut pool = Pool::random(50, 10_000, t, &mut r)?;
            total += play_query_game(&mut pool, strategy, 10, 10_000, &mut r)?.queries_used;
        }
        println!(
            "{}: {:.1} queries for 10 negatives on average",
            strategy.as_str(),
            total as f64 / 20.0
        );
    }
    Ok(())
}
