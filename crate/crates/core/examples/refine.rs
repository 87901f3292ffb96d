//! Localized gradient descent: the white-box angle stays below the scale σ_i.

use mq_halfspace::geometry::{Halfspace, UnitVector};
use mq_halfspace::oracles::{estimate_error, LabelSource, MembershipOracle, WhiteBoxView};
use mq_halfspace::refinement::{refine_observed, RefineConfig};
use mq_halfspace::rng;

fn main() -> mq_halfspace::error::Result<()> {
    let d = 10;
    let mut r = rng::stream(4, 0);
    let target = Halfspace::new(UnitVector::new(rng::gaussian_vector(d, &mut r))?, 1.0);
    let perp = UnitVector::new(target.w.project_out(&rng::gaussian_vector(d, &mut r)))?;
    let theta = 2.0 * 0.5f64.asin();
    let w0 = UnitVector::new(target.w.as_vector() * theta.cos() + perp.as_vector() * theta.sin())?;

    let source = LabelSource::Clean(target.clone());
    let view = WhiteBoxView::new(&source);
    let mut oracle = MembershipOracle::new(source.clone(), 4);
    let cfg = RefineConfig {
        sigma0: Some(0.5),
        ..RefineConfig::default()
    };
    let out = refine_observed(&mut oracle, &w0, 1.0, 0.01, 0.1, &cfg, &mut r, &mut |rec| {
        if rec.after.round % 20 == 0 {
            println!(
                "round {:>3}: σ = {:.4}, sin(θ/2) = {:.4}, offset {:.3}, queries {}",
                rec.after.round,
                rec.after.sigma,
                view.sin_half_angle(&rec.after.w),
                rec.offset,
                rec.after.ledger
            );
        }
    })?;
    let err = estimate_error(&source, &Halfspace::new(out.w, out.t_hat), 400_000, &mut r);
    println!(
        "{} rounds, {} queries, t_hat = {:.4}, error {:.4} ± {:.4}",
        out.rounds, out.queries, out.t_hat, err.err, err.se
    );
    Ok(())
}
