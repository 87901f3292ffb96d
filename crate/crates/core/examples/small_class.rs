//! Membership queries spent with and without a small-class sampler.

use mq_halfspace::scenario::{run_learn, Scenario};

fn main() -> mq_halfspace::error::Result<()> {
    let base = Scenario {
        dim: 20,
        tstar: Some(2.5),
        epsilon: 0.001,
        restarts: Some(1),
        ..Scenario::default()
    };
    for small_class_oracle in [false, true] {
        let r = run_learn(&Scenario {
            small_class_oracle,
            ..base.clone()
        })?
        .report;
        println!(
            "small-class oracle {small_class_oracle}: error {:.5}, membership queries {} (bias {}, init {}, refine {}), oracle draws {}, grid points {}",
            r.error.expect("evaluated").err,
            r.total_queries(),
            r.queries.bias,
            r.queries.init,
            r.queries.refine,
            r.small_class_draws,
            r.grid.len()
        );
    }
    Ok(())
}
