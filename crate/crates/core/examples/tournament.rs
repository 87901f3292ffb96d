//! Pairwise tournament over candidates with known errors.

use mq_halfspace::geometry::{Halfspace, UnitVector};
use mq_halfspace::learner::{tournament, Hypothesis, TournamentConfig};
use mq_halfspace::oracles::{LabelSource, MembershipOracle};
use mq_halfspace::rng;

fn main() -> mq_halfspace::error::Result<()> {
    let errors = [0.4, 0.2, 0.1, 0.05, 0.01];
    let target = Halfspace::new(UnitVector::basis(3, 0), 0.0);
    // Through the origin, a rotation by θ disagrees on a θ/π fraction.
    let pool: Vec<Hypothesis> = errors
        .iter()
        .map(|e| {
            let th = std::f64::consts::PI * e;
            Hypothesis::Halfspace(Halfspace::new(
                UnitVector::from_slice(&[th.cos(), th.sin(), 0.0]).unwrap(),
                0.0,
            ))
        })
        .collect();
    let mut r = rng::stream(6, 0);
    let mut oracle = MembershipOracle::new(LabelSource::Clean(target), 6);
    let out = tournament(
        &pool,
        &mut oracle,
        0.01,
        0.05,
        &TournamentConfig::default(),
        &mut r,
    )?;
    println!(
        "winner has error {} after {} queries; losses {:?}",
        errors[out.winner], out.queries, out.losses
    );
    Ok(())
}
