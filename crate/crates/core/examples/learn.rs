//! The full learner under three noise models.

use mq_halfspace::scenario::{run_learn, NoiseSpec, Scenario};

fn main() -> mq_halfspace::error::Result<()> {
    for noise in [
        NoiseSpec::Clean,
        NoiseSpec::Rcn(0.005),
        NoiseSpec::Band(0.02),
    ] {
        let s = Scenario {
            dim: 10,
            tstar: Some(1.0),
            epsilon: 0.02,
            noise,
            seed: 5,
            ..Scenario::default()
        };
        let run = run_learn(&s)?;
        let r = &run.report;
        let err = r.error.expect("evaluated");
        println!(
            "{noise}: {} with error {:.4} (opt {:?}), {} queries: bias {}, init {}, refine {}, tournament {}; {} candidates, {} failed attempts",
            r.verdict.as_str(),
            err.err,
            run.source.opt(),
            r.total_queries(),
            r.queries.bias,
            r.queries.init,
            r.queries.refine,
            r.queries.tournament,
            r.candidates.len(),
            r.failed_attempts
        );
    }
    let tiny = Scenario {
        dim: 10,
        tstar: Some(3.5),
        epsilon: 0.05,
        ..Scenario::default()
    };
    println!(
        "t* = 3.5, ε = 0.05: {}",
        run_learn(&tiny)?.report.verdict.as_str()
    );
    Ok(())
}
