use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mq_halfspace::error::{Error, Result};
use mq_halfspace::scenario::{run_scenario, ExitStatus, Mode, Scenario};

/// Membership-query halfspace learning lab. Writes CSV to stdout or `--out`.
#[derive(Debug, Parser)]
#[command(name = "mqlab", version)]
struct Args {
    /// learn | sweep | lowerbound | selftest
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    /// Target threshold t*.
    #[arg(long, conflicts_with = "bias")]
    tstar: Option<f64>,
    /// Target bias Φ(−t*).
    #[arg(long)]
    bias: Option<f64>,
    /// clean | rcn:<rate> | band:<width> | region:slab:<axis>:<lo>:<hi>
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Flat key = value scenario file; its mode defaults to sweep.
    #[arg(long)]
    sweep_file: Option<PathBuf>,
    /// Flat key = value scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Membership-query budget.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    small_class_oracle: bool,
    /// key=value override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn scenario(args: &Args) -> Result<Scenario> {
    let mut s = Scenario::default();
    if let Some(path) = &args.config {
        s.apply_text(&std::fs::read_to_string(path)?)?;
    }
    if let Some(path) = &args.sweep_file {
        s.mode = Mode::Sweep;
        s.apply_text(&std::fs::read_to_string(path)?)?;
    }
    let flags = [
        ("mode", args.mode.clone()),
        ("dim", args.dim.map(|v| v.to_string())),
        ("noise", args.noise.clone()),
        ("epsilon", args.epsilon.map(|v| v.to_string())),
        ("delta", args.delta.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("budget", args.budget.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            s.set(key, &v)?;
        }
    }
    if let Some(t) = args.tstar {
        s.bias = None;
        s.tstar = Some(t);
    }
    if let Some(p) = args.bias {
        s.tstar = None;
        s.bias = Some(p);
    }
    if args.small_class_oracle {
        s.small_class_oracle = true;
    }
    for kv in &args.set {
        s.apply_override(kv)?;
    }
    s.validate()?;
    Ok(s)
}

fn run(args: &Args) -> Result<ExitStatus> {
    let s = scenario(args)?;
    let outcome = run_scenario(&s)?;
    match &args.out {
        Some(path) => std::fs::write(path, &outcome.csv).map_err(Error::from)?,
        None => print!("{}", outcome.csv),
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let status = match run(&args) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("mqlab: {e}");
            ExitStatus::of_error(&e)
        }
    };
    if status == ExitStatus::Budget {
        eprintln!("mqlab: membership-query budget exhausted");
    }
    ExitCode::from(status.code() as u8)
}
