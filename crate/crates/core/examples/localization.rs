//! Localized and smoothed queries are exact halfspaces in the query coordinates.

use mq_halfspace::geometry::{localize_halfspace, smoothed_halfspace, Halfspace, UnitVector};
use mq_halfspace::initialization::localized_point;
use mq_halfspace::oracles::{LabelSource, MembershipOracle, WhiteBoxView};
use mq_halfspace::rng;

fn main() -> mq_halfspace::error::Result<()> {
    let d = 6;
    let mut r = rng::stream(1, 0);
    let target = Halfspace::new(UnitVector::new(rng::gaussian_vector(d, &mut r))?, 2.0);
    let guess = UnitVector::new(target.w.as_vector() + rng::gaussian_vector(d, &mut r) * 0.2)?;
    let (s, sigma) = (1.8, 0.3);

    let localized = localize_halfspace(&target, &guess, s, sigma)?;
    println!("target     t = {:.3}, bias {:.5}", target.t, target.bias());
    println!(
        "localized  t = {:.3}, bias {:.5}",
        localized.t,
        localized.bias()
    );
    let view = WhiteBoxView::new(&LabelSource::Clean(target.clone()));
    println!(
        "white-box localized bias {:.5}",
        view.localized_bias(&guess, sigma, s)
    );

    let mut oracle = MembershipOracle::new(LabelSource::Clean(target.clone()), 1);
    let n = 100_000;
    let mut neg = 0;
    for _ in 0..n {
        let z = rng::gaussian_vector(d, &mut r);
        let y = oracle.localized_query(&guess, s, sigma, &z)?;
        assert_eq!(y, target.eval(&localized_point(&guess, s, sigma, &z)));
        neg += y.is_negative() as usize;
    }
    println!(
        "empirical  bias {:.5} over {n} localized queries",
        neg as f64 / n as f64
    );

    let x0 = rng::gaussian_vector(d, &mut r);
    let smoothed = smoothed_halfspace(&target, &x0, 0.5)?;
    println!(
        "smoothed around x0 (margin {:.3}): t = {:.3}",
        target.margin(&x0),
        smoothed.t
    );
    Ok(())
}
