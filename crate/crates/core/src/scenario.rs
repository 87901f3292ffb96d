//! Scenario configs and the experiment runner behind the `mqlab` binary.
//!
//! A scenario is a flat `key = value` text (comments start with `#`). Runs are
//! seeded per component stream, so a scenario and seed always produce the same CSV.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::{normal_cdf, threshold_for_bias, Halfspace, UnitVector};
use crate::learner::{learn, LearnerConfig, RunReport};
use crate::lowerbound::{
    near_isometry_stat, negative_capture_prob, play_query_game, Pool, QueryStrategy,
};
use crate::oracles::{LabelSource, MembershipOracle, Region, SmallClassOracle};
use crate::rng::{self, keys};
use crate::selftest;

/// First column of every CSV row.
pub const CSV_SCHEMA: &str = "mqlab-v1";

pub const LEARN_COLUMNS: [&str; 22] = [
    "schema",
    "mode",
    "dim",
    "tstar",
    "bias",
    "noise",
    "epsilon",
    "delta",
    "seed",
    "small_class_oracle",
    "budget",
    "verdict",
    "err_estimate",
    "err_se",
    "total_queries",
    "queries_bias",
    "queries_init",
    "queries_refine",
    "queries_tournament",
    "small_class_draws",
    "rounds",
    "wall_ms",
];

pub const LOWERBOUND_COLUMNS: [&str; 11] = [
    "schema",
    "mode",
    "dim",
    "m",
    "k",
    "tstar",
    "bias",
    "seed",
    "statistic",
    "value",
    "se",
];

pub const SELFTEST_COLUMNS: [&str; 5] = ["schema", "mode", "check", "passed", "detail"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Learn,
    Sweep,
    Lowerbound,
    Selftest,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Learn => "learn",
            Mode::Sweep => "sweep",
            Mode::Lowerbound => "lowerbound",
            Mode::Selftest => "selftest",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "learn" => Ok(Mode::Learn),
            "sweep" => Ok(Mode::Sweep),
            "lowerbound" => Ok(Mode::Lowerbound),
            "selftest" => Ok(Mode::Selftest),
            _ => Err(Error::Config(format!(
                "mode: `{s}` is not one of learn, sweep, lowerbound, selftest"
            ))),
        }
    }
}

/// Label noise applied to the target halfspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Clean,
    /// `rcn:<rate>`
    Rcn(f64),
    /// `band:<half width>`
    Band(f64),
    /// `region:slab:<axis>:<lo>:<hi>`
    Slab {
        axis: usize,
        lo: f64,
        hi: f64,
    },
}

impl NoiseSpec {
    pub fn build(&self, target: Halfspace) -> Result<LabelSource> {
        match *self {
            NoiseSpec::Clean => Ok(LabelSource::Clean(target)),
            NoiseSpec::Rcn(rate) => LabelSource::random_flip(target, rate),
            NoiseSpec::Band(width) => LabelSource::boundary_band(target, width),
            NoiseSpec::Slab { axis, lo, hi } => {
                if axis >= target.dim() {
                    return Err(Error::Config(format!(
                        "noise: slab axis {axis} is outside dimension {}",
                        target.dim()
                    )));
                }
                Ok(LabelSource::RegionFlip {
                    target,
                    region: Region::CoordinateSlab { axis, lo, hi },
                })
            }
        }
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Clean => write!(f, "clean"),
            NoiseSpec::Rcn(r) => write!(f, "rcn:{r}"),
            NoiseSpec::Band(w) => write!(f, "band:{w}"),
            NoiseSpec::Slab { axis, lo, hi } => write!(f, "region:slab:{axis}:{lo}:{hi}"),
        }
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("noise: `{s}` {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| bad("has a non-numeric parameter"))
        };
        let spec = match parts.as_slice() {
            ["clean"] => NoiseSpec::Clean,
            ["rcn", r] => NoiseSpec::Rcn(num(r)?),
            ["band", w] => NoiseSpec::Band(num(w)?),
            ["region", "slab", axis, lo, hi] => NoiseSpec::Slab {
                axis: axis.parse().map_err(|_| bad("has a non-integer axis"))?,
                lo: num(lo)?,
                hi: num(hi)?,
            },
            _ => {
                return Err(bad(
                    "is not clean, rcn:<rate>, band:<width> or region:slab:<axis>:<lo>:<hi>",
                ))
            }
        };
        match spec {
            NoiseSpec::Rcn(r) if !(0.0..0.5).contains(&r) => Err(bad("needs a rate in [0, 1/2)")),
            NoiseSpec::Band(w) if !(w >= 0.0 && w.is_finite()) => Err(bad("needs a width ≥ 0")),
            NoiseSpec::Slab { lo, hi, .. } if !(lo <= hi) => Err(bad("needs lo ≤ hi")),
            _ => Ok(spec),
        }
    }
}

/// Lists crossed by sweep mode; empty lists fall back to the scalar fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepLists {
    pub dims: Vec<usize>,
    pub tstars: Vec<f64>,
    pub biases: Vec<f64>,
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundParams {
    /// Pool size.
    pub m: usize,
    /// Tuple size for the isometry and capture statistics.
    pub k: usize,
    pub tuples: usize,
    pub trials: usize,
    pub strategy: QueryStrategy,
    /// Negatives the query game looks for.
    pub game_k: usize,
    pub game_budget: usize,
    pub games: usize,
}

impl Default for LowerBoundParams {
    fn default() -> Self {
        LowerBoundParams {
            m: 2000,
            k: 10,
            tuples: 500,
            trials: 100_000,
            strategy: QueryStrategy::RandomOrder,
            game_k: 1,
            game_budget: 2000,
            games: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mode: Mode,
    pub dim: usize,
    pub tstar: Option<f64>,
    pub bias: Option<f64>,
    pub noise: NoiseSpec,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub small_class_oracle: bool,
    pub budget: Option<u64>,
    pub restarts: Option<usize>,
    pub grid_step: Option<f64>,
    /// Fresh samples for the reported error estimate.
    pub eval_samples: usize,
    /// Writes measured wall time instead of 0 into `wall_ms`; breaks byte-identical reruns.
    pub timing: bool,
    pub refine_c2: Option<f64>,
    pub sweep: SweepLists,
    pub lowerbound: LowerBoundParams,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            mode: Mode::Learn,
            dim: 20,
            tstar: None,
            bias: None,
            noise: NoiseSpec::Clean,
            epsilon: 0.02,
            delta: 0.1,
            seed: 0,
            small_class_oracle: false,
            budget: None,
            restarts: None,
            grid_step: None,
            eval_samples: 200_000,
            timing: false,
            refine_c2: None,
            sweep: SweepLists::default(),
            lowerbound: LowerBoundParams::default(),
        }
    }
}

fn parse_field<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse `{value}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse_field(key, v))
        .collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("{key}: `{value}` is not a boolean"))),
    }
}

impl Scenario {
    /// Sets one config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let lb = &mut self.lowerbound;
        match key.trim() {
            "mode" => self.mode = value.parse()?,
            "dim" => self.dim = parse_field(key, value)?,
            "tstar" => self.tstar = Some(parse_field(key, value)?),
            "bias" => self.bias = Some(parse_field(key, value)?),
            "noise" => self.noise = value.parse()?,
            "epsilon" => self.epsilon = parse_field(key, value)?,
            "delta" => self.delta = parse_field(key, value)?,
            "seed" => self.seed = parse_field(key, value)?,
            "small_class_oracle" => self.small_class_oracle = parse_bool(key, value)?,
            "budget" => self.budget = Some(parse_field(key, value)?),
            "restarts" => self.restarts = Some(parse_field(key, value)?),
            "grid_step" => self.grid_step = Some(parse_field(key, value)?),
            "eval_samples" => self.eval_samples = parse_field(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            "refine.c2" => self.refine_c2 = Some(parse_field(key, value)?),
            "sweep.dim" => self.sweep.dims = parse_list(key, value)?,
            "sweep.tstar" => self.sweep.tstars = parse_list(key, value)?,
            "sweep.bias" => self.sweep.biases = parse_list(key, value)?,
            "sweep.epsilon" => self.sweep.epsilons = parse_list(key, value)?,
            "lb.m" => lb.m = parse_field(key, value)?,
            "lb.k" => lb.k = parse_field(key, value)?,
            "lb.tuples" => lb.tuples = parse_field(key, value)?,
            "lb.trials" => lb.trials = parse_field(key, value)?,
            "lb.strategy" => {
                lb.strategy = QueryStrategy::parse(value).ok_or_else(|| {
                    Error::Config(format!("{key}: `{value}` is not random, greedy or oracle"))
                })?
            }
            "lb.game_k" => lb.game_k = parse_field(key, value)?,
            "lb.game_budget" => lb.game_budget = parse_field(key, value)?,
            "lb.games" => lb.games = parse_field(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{kv}` is not key=value")))?;
        self.set(k, v)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut s = Scenario::default();
        s.apply_text(text)?;
        s.validate()?;
        Ok(s)
    }

    /// Checks ranges and the one-of rule for `tstar` and `bias`.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if self.dim == 0 {
            problems.push("dim must be at least 1".to_string());
        }
        if !unit(self.epsilon) {
            problems.push(format!("epsilon = {} is not in (0, 1)", self.epsilon));
        }
        if !unit(self.delta) {
            problems.push(format!("delta = {} is not in (0, 1)", self.delta));
        }
        if self.tstar.is_some() && self.bias.is_some() {
            problems.push("tstar and bias are mutually exclusive".to_string());
        }
        let sweeps_target = !self.sweep.tstars.is_empty() || !self.sweep.biases.is_empty();
        let needs_target = match self.mode {
            Mode::Selftest => false,
            Mode::Sweep => !sweeps_target,
            Mode::Learn | Mode::Lowerbound => true,
        };
        if needs_target && self.tstar.is_none() && self.bias.is_none() {
            problems.push("one of tstar or bias is required".to_string());
        }
        if !self.sweep.tstars.is_empty() && !self.sweep.biases.is_empty() {
            problems.push("sweep.tstar and sweep.bias are mutually exclusive".to_string());
        }
        if let Some(t) = self.tstar {
            if !t.is_finite() {
                problems.push(format!("tstar = {t} is not finite"));
            }
        }
        for p in self.bias.iter().chain(&self.sweep.biases) {
            if !unit(*p) {
                problems.push(format!("bias = {p} is not in (0, 1)"));
            }
        }
        for e in &self.sweep.epsilons {
            if !unit(*e) {
                problems.push(format!("sweep.epsilon = {e} is not in (0, 1)"));
            }
        }
        if self.sweep.dims.contains(&0) {
            problems.push("sweep.dim entries must be at least 1".to_string());
        }
        if self.restarts == Some(0) {
            problems.push("restarts must be at least 1".to_string());
        }
        if self.eval_samples == 0 {
            problems.push("eval_samples must be at least 1".to_string());
        }
        if let NoiseSpec::Slab { axis, .. } = self.noise {
            if axis >= self.dim {
                problems.push(format!(
                    "noise slab axis {axis} is outside dim {}",
                    self.dim
                ));
            }
        }
        let lb = &self.lowerbound;
        if self.mode == Mode::Lowerbound {
            if lb.k == 0 || lb.k > lb.m.min(self.dim) {
                problems.push(format!("lb.k = {} must be in [1, min(lb.m, dim)]", lb.k));
            }
            if lb.tuples == 0 || lb.trials == 0 || lb.games == 0 || lb.game_budget == 0 {
                problems.push(
                    "lb.tuples, lb.trials, lb.games and lb.game_budget must be positive"
                        .to_string(),
                );
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    /// Target threshold `t*`, converting from `bias` when needed.
    pub fn threshold(&self) -> Result<f64> {
        match (self.tstar, self.bias) {
            (Some(t), None) => Ok(t),
            (None, Some(p)) => threshold_for_bias(p),
            _ => Err(Error::Config(
                "exactly one of tstar or bias is required".into(),
            )),
        }
    }

    pub fn learner_config(&self) -> LearnerConfig {
        let mut cfg = LearnerConfig::new(self.epsilon, self.delta);
        cfg.restarts_per_gridpoint = self.restarts;
        cfg.grid_step = self.grid_step;
        cfg.budget = self.budget;
        if let Some(c2) = self.refine_c2 {
            cfg.refine.c2 = c2;
        }
        cfg
    }

    /// Target halfspace with a direction drawn from the seed's target stream.
    pub fn target(&self) -> Result<Halfspace> {
        let t = self.threshold()?;
        let mut r = rng::stream(self.seed, keys::TARGET);
        let w = UnitVector::new(rng::gaussian_vector(self.dim, &mut r))?;
        Ok(Halfspace::new(w, t))
    }

    /// Single-run scenarios of a sweep, in output order.
    pub fn sweep_cells(&self) -> Vec<Scenario> {
        let dims = if self.sweep.dims.is_empty() {
            vec![self.dim]
        } else {
            self.sweep.dims.clone()
        };
        let targets: Vec<(Option<f64>, Option<f64>)> = if !self.sweep.tstars.is_empty() {
            self.sweep.tstars.iter().map(|&t| (Some(t), None)).collect()
        } else if !self.sweep.biases.is_empty() {
            self.sweep.biases.iter().map(|&p| (None, Some(p))).collect()
        } else {
            vec![(self.tstar, self.bias)]
        };
        let epsilons = if self.sweep.epsilons.is_empty() {
            vec![self.epsilon]
        } else {
            self.sweep.epsilons.clone()
        };
        let mut cells = Vec::new();
        for &dim in &dims {
            for &(tstar, bias) in &targets {
                for &epsilon in &epsilons {
                    cells.push(Scenario {
                        mode: Mode::Learn,
                        dim,
                        tstar,
                        bias,
                        epsilon,
                        sweep: SweepLists::default(),
                        ..self.clone()
                    });
                }
            }
        }
        cells
    }
}

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok,
    Usage,
    Budget,
    SelftestFailed,
    /// Any other runtime error.
    Failure,
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::Usage => 1,
            ExitStatus::Budget => 2,
            ExitStatus::SelftestFailed => 3,
            ExitStatus::Failure => 4,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Config(_) => ExitStatus::Usage,
            Error::BudgetExhausted { .. } => ExitStatus::Budget,
            _ => ExitStatus::Failure,
        }
    }
}

/// CSV text plus the exit status of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub status: ExitStatus,
}

/// One learner run and the source it was evaluated against.
#[derive(Debug, Clone)]
pub struct LearnRun {
    pub scenario: Scenario,
    pub source: LabelSource,
    pub report: RunReport,
}

/// Runs the learner for a single-run scenario and evaluates its output.
pub fn run_learn(s: &Scenario) -> Result<LearnRun> {
    s.validate()?;
    let clock = Instant::now();
    let source = s.noise.build(s.target()?)?;
    let mut oracle = MembershipOracle::new(source.clone(), s.seed);
    let mut small = SmallClassOracle::new(source.clone(), s.seed);
    let cfg = s.learner_config();
    let mut r = rng::stream(s.seed, keys::LEARNER);
    let small_ref = if s.small_class_oracle {
        Some(&mut small)
    } else {
        None
    };
    let mut report = learn(&mut oracle, small_ref, &cfg, &mut r)?;
    let mut eval_rng = rng::stream(s.seed, keys::EVALUATION);
    report.evaluate(&source, s.eval_samples, &mut eval_rng);
    report.wall_ms = if s.timing {
        clock.elapsed().as_millis()
    } else {
        0
    };
    Ok(LearnRun {
        scenario: s.clone(),
        source,
        report,
    })
}

fn header(columns: &[&str]) -> String {
    let mut h = columns.join(",");
    h.push('\n');
    h
}

fn opt_display<T: fmt::Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// The CSV row of a learner run.
pub fn learn_row(run: &LearnRun) -> Result<String> {
    let s = &run.scenario;
    let r = &run.report;
    let t = s.threshold()?;
    let err = r.error.as_ref();
    let q = &r.queries;
    let fields = [
        CSV_SCHEMA.to_string(),
        s.mode.as_str().to_string(),
        s.dim.to_string(),
        t.to_string(),
        s.bias.unwrap_or_else(|| normal_cdf(-t)).to_string(),
        s.noise.to_string(),
        s.epsilon.to_string(),
        s.delta.to_string(),
        s.seed.to_string(),
        s.small_class_oracle.to_string(),
        opt_display(s.budget),
        r.verdict.as_str().to_string(),
        opt_display(err.map(|e| e.err)),
        opt_display(err.map(|e| e.se)),
        r.total_queries().to_string(),
        q.bias.to_string(),
        q.init.to_string(),
        q.refine.to_string(),
        q.tournament.to_string(),
        r.small_class_draws.to_string(),
        r.rounds.to_string(),
        r.wall_ms.to_string(),
    ];
    Ok(fields.join(",") + "\n")
}

fn run_learn_mode(cells: &[Scenario]) -> Result<Outcome> {
    let mut csv = header(&LEARN_COLUMNS);
    let mut status = ExitStatus::Ok;
    for cell in cells {
        let run = run_learn(cell)?;
        if run.report.budget_exhausted {
            status = ExitStatus::Budget;
        }
        csv.push_str(&learn_row(&run)?);
    }
    Ok(Outcome { csv, status })
}

/// Lower-bound statistics: isometry, capture probability and the query game.
pub fn run_lowerbound(s: &Scenario) -> Result<Outcome> {
    s.validate()?;
    let lb = &s.lowerbound;
    let t = s.threshold()?;
    let p = normal_cdf(-t);
    let mut r = rng::stream(s.seed, keys::LOWER_BOUND);
    let pool = Pool::random(s.dim, lb.m, t, &mut r)?;
    let stat = near_isometry_stat(&pool, lb.k, lb.tuples, &mut r)?;
    let rows: Vec<_> = (0..lb.k).map(|i| pool.point(i).clone()).collect();
    let capture = negative_capture_prob(&rows, t, lb.trials, &mut r)?;
    let mut queries = Vec::with_capacity(lb.games);
    let mut negatives = 0usize;
    for g in 0..lb.games {
        let mut game_rng = rng::split(&mut r, g as u64);
        let mut game_pool = Pool::random(s.dim, lb.m, t, &mut game_rng)?;
        let out = play_query_game(
            &mut game_pool,
            lb.strategy,
            lb.game_k,
            lb.game_budget,
            &mut game_rng,
        )?;
        queries.push(out.queries_used as f64);
        negatives += out.negatives_found;
    }
    let mut sorted = queries.clone();
    sorted.sort_by(f64::total_cmp);
    let median = median_of_sorted(&sorted);
    let mean_neg = negatives as f64 / lb.games as f64;

    let mut csv = header(&LOWERBOUND_COLUMNS);
    let prefix = format!(
        "{CSV_SCHEMA},lowerbound,{},{},{},{t},{p},{}",
        s.dim, lb.m, lb.k, s.seed
    );
    let strategy = lb.strategy.as_str();
    let mut line = |name: &str, value: f64, se: Option<f64>| {
        let _ = writeln!(csv, "{prefix},{name},{value},{}", opt_display(se));
    };
    line("near_isometry_stat", stat, None);
    line("capture_probability", capture.probability, Some(capture.se));
    line(
        "capture_normalized_ratio",
        capture.normalized_ratio(lb.k, t),
        None,
    );
    line(&format!("game_{strategy}_median_queries"), median, None);
    line(&format!("game_{strategy}_mean_negatives"), mean_neg, None);
    line("inverse_bias", 1.0 / p, None);
    Ok(Outcome {
        csv,
        status: ExitStatus::Ok,
    })
}

/// Median of an ascending slice; the mean of the middle pair for even lengths.
pub fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn run_selftest(s: &Scenario) -> Outcome {
    let results = selftest::run_all(s.seed);
    let mut csv = header(&SELFTEST_COLUMNS);
    let mut status = ExitStatus::Ok;
    for c in &results {
        if !c.passed {
            status = ExitStatus::SelftestFailed;
        }
        let detail = c.detail.replace(',', ";");
        let _ = writeln!(
            csv,
            "{CSV_SCHEMA},selftest,{},{},{detail}",
            c.name, c.passed
        );
    }
    Outcome { csv, status }
}

/// Runs a scenario in its mode and returns the CSV and exit status.
pub fn run_scenario(s: &Scenario) -> Result<Outcome> {
    s.validate()?;
    match s.mode {
        Mode::Learn => run_learn_mode(std::slice::from_ref(s)),
        Mode::Sweep => run_learn_mode(&s.sweep_cells()),
        Mode::Lowerbound => run_lowerbound(s),
        Mode::Selftest => Ok(run_selftest(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_specs_round_trip() {
        for text in ["clean", "rcn:0.05", "band:0.02", "region:slab:1:0.5:1.5"] {
            let spec: NoiseSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("rcn:0.7".parse::<NoiseSpec>().is_err());
        assert!("band".parse::<NoiseSpec>().is_err());
        assert!("region:slab:0:2:1".parse::<NoiseSpec>().is_err());
    }

    #[test]
    fn config_text_and_diagnostics() {
        let s = Scenario::from_text(
            "# demo\nmode = sweep\nsweep.dim = 5, 10\nbias = 0.1\nepsilon=0.05\n",
        )
        .unwrap();
        assert_eq!(s.mode, Mode::Sweep);
        assert_eq!(s.sweep.dims, vec![5, 10]);
        assert_eq!(s.sweep_cells().len(), 2);
        let err = Scenario::from_text("tstar = 1\nbias = 0.1\n").unwrap_err();
        assert!(err.to_string().contains("mutually exclusive"));
        let err = Scenario::from_text("dimm = 3\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        assert!(Scenario::from_text("epsilon = 2\ntstar = 1\n").is_err());
        assert!(Scenario::from_text("mode = learn\n").is_err());
    }

    #[test]
    fn sweep_cells_are_ordered() {
        let mut s = Scenario::default();
        s.mode = Mode::Sweep;
        s.tstar = Some(1.0);
        s.sweep.dims = vec![5, 10];
        s.sweep.epsilons = vec![0.1, 0.05];
        let cells: Vec<(usize, f64)> = s.sweep_cells().iter().map(|c| (c.dim, c.epsilon)).collect();
        assert_eq!(cells, vec![(5, 0.1), (5, 0.05), (10, 0.1), (10, 0.05)]);
    }

    #[test]
    fn median_handles_parity() {
        assert_eq!(median_of_sorted(&[1.0, 2.0, 9.0]), 2.0);
        assert_eq!(median_of_sorted(&[1.0, 2.0, 4.0, 9.0]), 3.0);
    }
}
