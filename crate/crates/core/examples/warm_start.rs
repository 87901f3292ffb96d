//! Warm starts from a negative example and smoothed Chow estimates.

use mq_halfspace::geometry::{Halfspace, UnitVector};
use mq_halfspace::initialization::{init_unextreme, InitConfig};
use mq_halfspace::oracles::{LabelSource, MembershipOracle, SmallClassOracle};
use mq_halfspace::rng;

fn main() -> mq_halfspace::error::Result<()> {
    let d = 20;
    let cfg = InitConfig::default();
    for t in [0.5, 1.0, 2.0, 3.0] {
        let mut r = rng::stream(3, 0);
        let target = Halfspace::new(UnitVector::new(rng::gaussian_vector(d, &mut r))?, t);
        let source = LabelSource::random_flip(target.clone(), 0.005)?;
        let mut oracle = MembershipOracle::new(source.clone(), 3);
        let w0 = init_unextreme(&mut oracle, None, t, 0.01, 0.1, &cfg, &mut r)?;
        let plain = oracle.ledger();
        let mut small = SmallClassOracle::new(source.clone(), 3);
        let mut oracle = MembershipOracle::new(source, 3);
        let w1 = init_unextreme(&mut oracle, Some(&mut small), t, 0.01, 0.1, &cfg, &mut r)?;
        println!(
            "t* = {t}: sin(θ/2) = {:.3} with {plain} queries; with a small-class oracle {:.3} ({} queries, {} draws)",
            w0.sin_half_angle(&target.w),
            w1.sin_half_angle(&target.w),
            oracle.ledger(),
            small.draws()
        );
    }
    Ok(())
}
