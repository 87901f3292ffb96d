//! A dimension sweep written as CSV, the same output `mqlab --mode sweep` produces.

use mq_halfspace::scenario::{run_scenario, Scenario};

fn main() -> mq_halfspace::error::Result<()> {
    let s = Scenario::from_text(
        "mode = sweep\nbias = 0.1\nepsilon = 0.02\nsweep.dim = 5, 10, 20\neval_samples = 50000\n",
    )?;
    let out = run_scenario(&s)?;
    print!("{}", out.csv);
    Ok(())
}
