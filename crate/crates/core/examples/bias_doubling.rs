//! Bias estimation by a geometric ladder of levels: cost grows like 1/p.

use mq_halfspace::estimation::{estimate_bias_doubling, BiasConfig, BiasVerdict};
use mq_halfspace::geometry::{threshold_for_bias, Halfspace, UnitVector};
use mq_halfspace::oracles::{LabelSource, MembershipOracle};
use mq_halfspace::rng;

fn main() -> mq_halfspace::error::Result<()> {
    let mut r = rng::stream(2, 0);
    println!(
        "{:>8} {:>10} {:>10} {:>8}",
        "p", "p_hat", "queries", "levels"
    );
    for p in [0.4, 0.2, 0.1, 0.05, 0.02, 0.01, 0.001] {
        let h = Halfspace::new(UnitVector::basis(4, 0), threshold_for_bias(p)?);
        let mut oracle = MembershipOracle::new(LabelSource::Clean(h), 2);
        let est = estimate_bias_doubling(&mut oracle, 0.002, 0.1, &BiasConfig::default(), &mut r)?;
        let p_hat = match est.verdict {
            BiasVerdict::Bracket { p_hat } => format!("{p_hat:.4}"),
            BiasVerdict::Small => "small".to_string(),
        };
        println!(
            "{p:>8} {p_hat:>10} {:>10} {:>8}",
            est.queries_used, est.levels
        );
    }
    Ok(())
}
