//! The end-to-end learner.
//!
//! [`learn`] estimates the bias, lays a grid of threshold guesses, runs
//! restarted initialization plus refinement at every guess and keeps the
//! candidate that survives a pairwise [`tournament`]. [`learn_with_noise_ladder`]
//! repeats this at geometrically growing accuracy targets and pools the winners.

use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimation::{
    check_unit_interval, estimate_bias_doubling, BiasConfig, BiasEstimate, BiasVerdict,
};
use crate::geometry::{halfspace_bias, threshold_for_bias, Halfspace, Label, Point};
use crate::initialization::{init_extreme, init_unextreme, InitConfig};
use crate::oracles::{
    estimate_error, Classifier, ErrorEstimate, LabelSource, MembershipOracle, SmallClassOracle,
};
use crate::refinement::{refine, RefineConfig};
use crate::rng;

/// An output hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Halfspace(Halfspace),
    Constant(Label),
}

impl Hypothesis {
    pub fn complement(&self) -> Self {
        match self {
            Hypothesis::Halfspace(h) => Hypothesis::Halfspace(h.complement()),
            Hypothesis::Constant(l) => Hypothesis::Constant(l.flipped()),
        }
    }

    pub fn as_halfspace(&self) -> Option<&Halfspace> {
        match self {
            Hypothesis::Halfspace(h) => Some(h),
            Hypothesis::Constant(_) => None,
        }
    }
}

impl Classifier for Hypothesis {
    fn classify(&self, x: &Point) -> Label {
        match self {
            Hypothesis::Halfspace(h) => h.eval(x),
            Hypothesis::Constant(l) => *l,
        }
    }
}

/// Knobs of the pairwise [`tournament`].
#[derive(Debug, Clone, PartialEq)]
pub struct TournamentConfig {
    /// Hoeffding radius `r` of each pairwise comparison; a loss needs a mistake share above `1/2 + 2r`.
    pub radius: f64,
    /// Unlabeled pool size is `⌈pool_multiplier · n_l / ε⌉`, capped at `pool_cap`.
    pub pool_multiplier: f64,
    pub pool_cap: usize,
    /// Pairs disagreeing on less than `tie_fraction · ε` of the pool are ties.
    pub tie_fraction: f64,
}

impl Default for TournamentConfig {
    fn default() -> Self {
        TournamentConfig {
            radius: 0.1,
            pool_multiplier: 4.0,
            pool_cap: 200_000,
            tie_fraction: 0.25,
        }
    }
}

/// Outcome of a [`tournament`].
#[derive(Debug, Clone, PartialEq)]
pub struct TournamentOutcome {
    pub winner: usize,
    pub losses: Vec<usize>,
    pub queries: u64,
}

/// Selects a candidate whose error is within a constant factor of the best one.
///
/// All pairs share one unlabeled Gaussian pool. For each pair the first
/// `n_l` pool points where the two disagree are labeled (each pool point at
/// most once) and a candidate loses when it is wrong on more than `1/2 + 2r`
/// of them. The winner has the fewest losses, ties broken by its mistake share.
pub fn tournament(
    candidates: &[Hypothesis],
    oracle: &mut MembershipOracle,
    epsilon: f64,
    delta: f64,
    cfg: &TournamentConfig,
    rng: &mut impl Rng,
) -> Result<TournamentOutcome> {
    let k = candidates.len();
    if k == 0 {
        return Err(Error::NoCandidates);
    }
    if k == 1 {
        return Ok(TournamentOutcome {
            winner: 0,
            losses: vec![0],
            queries: 0,
        });
    }
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    let start = oracle.ledger();
    let d = oracle.dim();
    let log_term = (2.0 * (k * k) as f64 / delta).ln();
    let n_l = (log_term / (2.0 * cfg.radius * cfg.radius)).ceil() as usize;
    let pool_n = ((cfg.pool_multiplier * n_l as f64 / epsilon).ceil() as usize).min(cfg.pool_cap);

    let pool: Vec<Point> = (0..pool_n).map(|_| rng::gaussian_vector(d, rng)).collect();
    let preds: Vec<Vec<Label>> = candidates
        .iter()
        .map(|h| pool.iter().map(|x| h.classify(x)).collect())
        .collect();
    let mut labels: Vec<Option<Label>> = vec![None; pool_n];
    let mut losses = vec![0usize; k];
    let mut share = vec![0.0f64; k];

    for i in 0..k {
        for j in (i + 1)..k {
            let disagree: Vec<usize> = (0..pool_n)
                .filter(|&x| preds[i][x] != preds[j][x])
                .collect();
            if (disagree.len() as f64) < cfg.tie_fraction * epsilon * pool_n as f64
                || disagree.is_empty()
            {
                continue;
            }
            let used = &disagree[..disagree.len().min(n_l)];
            let mut wrong_i = 0usize;
            for &x in used {
                let y = match labels[x] {
                    Some(y) => y,
                    None => {
                        let y = oracle.query(&pool[x])?;
                        labels[x] = Some(y);
                        y
                    }
                };
                if preds[i][x] != y {
                    wrong_i += 1;
                }
            }
            let n = used.len() as f64;
            let fi = wrong_i as f64 / n;
            let radius = (log_term / (2.0 * n)).sqrt();
            if fi > 0.5 + 2.0 * radius {
                losses[i] += 1;
            } else if 1.0 - fi > 0.5 + 2.0 * radius {
                losses[j] += 1;
            }
            share[i] += fi - 0.5;
            share[j] += 0.5 - fi;
        }
    }
    let winner = (0..k)
        .min_by(|&a, &b| {
            losses[a]
                .cmp(&losses[b])
                .then(share[a].total_cmp(&share[b]))
        })
        .expect("k ≥ 2");
    Ok(TournamentOutcome {
        winner,
        losses,
        queries: oracle.ledger() - start,
    })
}

/// Every knob of the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Restarts per threshold guess; `None` means `⌈ln(1/δ)⌉`, at least one.
    pub restarts_per_gridpoint: Option<usize>,
    /// Threshold grid spacing; `None` means `1/(2 ln(1/ε))`, or `1/ln(1/ε)` with a small-class oracle.
    pub grid_step: Option<f64>,
    /// The constant hypothesis is returned once the bias is certified below `c_small · ε`.
    pub c_small: f64,
    /// Error factor of the tournament guarantee.
    pub tournament_factor: f64,
    pub bias: BiasConfig,
    pub init: InitConfig,
    pub refine: RefineConfig,
    pub tournament: TournamentConfig,
    /// Membership queries this run may spend.
    pub budget: Option<u64>,
}

impl LearnerConfig {
    pub fn new(epsilon: f64, delta: f64) -> Self {
        LearnerConfig {
            epsilon,
            delta,
            restarts_per_gridpoint: None,
            grid_step: None,
            c_small: 4.0,
            tournament_factor: 10.0,
            bias: BiasConfig::default(),
            init: InitConfig::default(),
            refine: RefineConfig::default(),
            tournament: TournamentConfig::default(),
            budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("epsilon", self.epsilon).map_err(|e| Error::Config(e.to_string()))?;
        check_unit_interval("delta", self.delta).map_err(|e| Error::Config(e.to_string()))?;
        if self.restarts_per_gridpoint == Some(0) {
            return Err(Error::Config(
                "restarts_per_gridpoint must be at least 1".into(),
            ));
        }
        if self.grid_step.is_some_and(|g| !(g > 0.0)) {
            return Err(Error::Config("grid_step must be positive".into()));
        }
        if !(self.c_small > 0.0 && self.tournament_factor > 0.0) {
            return Err(Error::Config(
                "c_small and tournament_factor must be positive".into(),
            ));
        }
        let t = &self.tournament;
        if !(t.radius > 0.0 && t.radius < 0.25 && t.pool_multiplier > 0.0 && t.pool_cap > 0) {
            return Err(Error::Config(
                "tournament radius must be in (0, 1/4) and pool sizes positive".into(),
            ));
        }
        self.init.validate()?;
        self.refine.validate()
    }

    pub fn restarts(&self) -> usize {
        self.restarts_per_gridpoint
            .unwrap_or_else(|| ((1.0 / self.delta).ln().ceil() as usize).max(1))
    }

    fn log_inv_epsilon(&self) -> f64 {
        (1.0 / self.epsilon).ln().max(1.0)
    }

    pub fn step(&self, with_small_class: bool) -> f64 {
        self.grid_step.unwrap_or_else(|| {
            if with_small_class {
                1.0 / self.log_inv_epsilon()
            } else {
                1.0 / (2.0 * self.log_inv_epsilon())
            }
        })
    }

    /// Extreme initialization is used iff `η̂ √ln(1/η̂) > 1/(400 t)`, `η̂ = ε/p̂`.
    pub fn is_extreme(&self, t: f64, p_hat: f64) -> bool {
        let eta = self.epsilon / p_hat;
        t > 0.0 && eta < 1.0 && eta * (1.0 / eta).ln().sqrt() > 1.0 / (400.0 * t)
    }
}

/// Threshold guesses `t_a = t_0 < … < t_ψ = t_b` with `p(t_a) = min(2p̂, 1/2)` and `p(t_b) = p̂`.
pub fn threshold_grid(p_hat: f64, step: f64) -> Result<Vec<f64>> {
    let t_b = threshold_for_bias(p_hat)?.max(0.0);
    let t_a = if 2.0 * p_hat >= 0.5 {
        0.0
    } else {
        threshold_for_bias(2.0 * p_hat)?
    };
    let t_a = t_a.min(t_b);
    let psi = ((t_b - t_a) / step - 1e-9).ceil().max(0.0) as usize;
    Ok((0..=psi)
        .map(|j| if j == psi { t_b } else { t_a + j as f64 * step })
        .collect())
}

/// Threshold guesses `i · step ≤ √(2 ln(1/ε))` used when a small-class oracle replaces bias estimation.
pub fn small_class_grid(epsilon: f64, step: f64) -> Vec<f64> {
    let t_max = (2.0 * (1.0 / epsilon).ln()).sqrt();
    let n = (t_max / step + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Learned,
    ConstantPlusOne,
    ConstantMinusOne,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Learned => "learned",
            Verdict::ConstantPlusOne => "constant_plus_one",
            Verdict::ConstantMinusOne => "constant_minus_one",
        }
    }
}

/// Membership queries by stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageQueries {
    pub bias: u64,
    pub init: u64,
    pub refine: u64,
    pub tournament: u64,
}

impl StageQueries {
    pub fn total(&self) -> u64 {
        self.bias + self.init + self.refine + self.tournament
    }

    fn add(&mut self, other: &StageQueries) {
        self.bias += other.bias;
        self.init += other.init;
        self.refine += other.refine;
        self.tournament += other.tournament;
    }
}

/// One pooled candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub hypothesis: Hypothesis,
    /// Threshold guess (or ladder accuracy) that produced it.
    pub origin: f64,
    pub error: Option<ErrorEstimate>,
}

/// Everything a learning run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub hypothesis: Hypothesis,
    pub verdict: Verdict,
    pub queries: StageQueries,
    pub small_class_draws: u64,
    pub candidates: Vec<Candidate>,
    pub bias: Option<BiasEstimate>,
    pub grid: Vec<f64>,
    pub rounds: usize,
    pub failed_attempts: usize,
    pub labels_flipped: bool,
    pub budget_exhausted: bool,
    pub error: Option<ErrorEstimate>,
    pub wall_ms: u128,
}

impl RunReport {
    pub fn total_queries(&self) -> u64 {
        self.queries.total()
    }

    /// Fills in Monte Carlo errors of the output and of every candidate.
    pub fn evaluate(&mut self, source: &LabelSource, samples: usize, rng: &mut impl Rng) {
        self.error = Some(estimate_error(source, &self.hypothesis, samples, rng));
        for c in &mut self.candidates {
            c.error = Some(estimate_error(source, &c.hypothesis, samples, rng));
        }
    }
}

fn verdict_of(h: &Hypothesis) -> Verdict {
    match h {
        Hypothesis::Halfspace(_) => Verdict::Learned,
        Hypothesis::Constant(Label::Positive) => Verdict::ConstantPlusOne,
        Hypothesis::Constant(Label::Negative) => Verdict::ConstantMinusOne,
    }
}

struct BudgetGuard {
    previous: Option<u64>,
}

impl BudgetGuard {
    fn install(oracle: &mut MembershipOracle, budget: Option<u64>) -> Self {
        let previous = oracle.budget();
        if let Some(b) = budget {
            let cap = oracle.ledger().saturating_add(b);
            oracle.set_budget(Some(previous.map_or(cap, |p| p.min(cap))));
        }
        BudgetGuard { previous }
    }

    fn restore(self, oracle: &mut MembershipOracle) {
        oracle.set_budget(self.previous);
    }
}

/// Learns a halfspace with error `O(opt) + ε` from membership queries.
pub fn learn(
    oracle: &mut MembershipOracle,
    small_class: Option<&mut SmallClassOracle>,
    cfg: &LearnerConfig,
    rng: &mut impl Rng,
) -> Result<RunReport> {
    cfg.validate()?;
    let guard = BudgetGuard::install(oracle, cfg.budget);
    let report = learn_inner(oracle, small_class, cfg, rng);
    oracle.set_label_flip(false);
    guard.restore(oracle);
    report
}

fn learn_inner(
    oracle: &mut MembershipOracle,
    mut small_class: Option<&mut SmallClassOracle>,
    cfg: &LearnerConfig,
    rng: &mut impl Rng,
) -> Result<RunReport> {
    let clock = Instant::now();
    let draws_start = small_class.as_ref().map_or(0, |s| s.draws());
    let mut report = RunReport {
        hypothesis: Hypothesis::Constant(Label::Positive),
        verdict: Verdict::ConstantPlusOne,
        queries: StageQueries::default(),
        small_class_draws: 0,
        candidates: Vec::new(),
        bias: None,
        grid: Vec::new(),
        rounds: 0,
        failed_attempts: 0,
        labels_flipped: false,
        budget_exhausted: false,
        error: None,
        wall_ms: 0,
    };
    let bias_cfg = BiasConfig {
        stop_constant: cfg.c_small,
        ..cfg.bias.clone()
    };
    let finish = |mut report: RunReport, small: Option<&SmallClassOracle>| {
        if report.labels_flipped {
            report.hypothesis = report.hypothesis.complement();
            for c in &mut report.candidates {
                c.hypothesis = c.hypothesis.complement();
            }
        }
        report.verdict = verdict_of(&report.hypothesis);
        report.small_class_draws = small.map_or(0, |s| s.draws() - draws_start);
        report.wall_ms = clock.elapsed().as_millis();
        Ok(report)
    };

    // Stage 1: bias, unless a small-class oracle makes the threshold search bias-free.
    let extreme_bias;
    if small_class.is_some() {
        report.grid = small_class_grid(cfg.epsilon, cfg.step(true));
        extreme_bias = None;
    } else {
        let ledger = oracle.ledger();
        let mut estimate =
            match estimate_bias_doubling(oracle, cfg.epsilon, cfg.delta, &bias_cfg, rng) {
                Ok(e) => e,
                Err(e) if e.is_budget() => {
                    report.queries.bias = oracle.ledger() - ledger;
                    report.budget_exhausted = true;
                    return finish(report, small_class.as_deref());
                }
                Err(e) => return Err(e),
            };
        if estimate.first_level_negative_fraction > 0.5 {
            oracle.set_label_flip(true);
            report.labels_flipped = true;
            estimate = match estimate_bias_doubling(oracle, cfg.epsilon, cfg.delta, &bias_cfg, rng)
            {
                Ok(e) => e,
                Err(e) if e.is_budget() => {
                    report.queries.bias = oracle.ledger() - ledger;
                    report.budget_exhausted = true;
                    return finish(report, small_class.as_deref());
                }
                Err(e) => return Err(e),
            };
        }
        report.queries.bias = oracle.ledger() - ledger;
        report.bias = Some(estimate);
        match estimate.verdict {
            BiasVerdict::Small => return finish(report, small_class.as_deref()),
            BiasVerdict::Bracket { p_hat } => {
                report.grid = threshold_grid(p_hat, cfg.step(false))?;
                extreme_bias = Some(p_hat);
            }
        }
    }

    // Stage 2: restarted initialization and refinement at every threshold guess.
    let restarts = cfg.restarts();
    'grid: for &t in &report.grid.clone() {
        let p_hat = match extreme_bias {
            Some(p) => p,
            None => halfspace_bias(t)?.min(0.5),
        };
        for _ in 0..restarts {
            let mut attempt_rng = rng::split(rng, 0);
            let before = oracle.ledger();
            let init = if cfg.is_extreme(t, p_hat) {
                init_extreme(
                    oracle,
                    small_class.as_deref_mut(),
                    t,
                    cfg.epsilon,
                    p_hat,
                    cfg.delta,
                    &cfg.init,
                    &mut attempt_rng,
                )
            } else {
                init_unextreme(
                    oracle,
                    small_class.as_deref_mut(),
                    t,
                    cfg.epsilon,
                    cfg.delta,
                    &cfg.init,
                    &mut attempt_rng,
                )
            };
            report.queries.init += oracle.ledger() - before;
            let w0 = match init {
                Ok(w) => w,
                Err(e) if e.is_budget() => {
                    report.budget_exhausted = true;
                    break 'grid;
                }
                Err(_) => {
                    report.failed_attempts += 1;
                    continue;
                }
            };
            let before = oracle.ledger();
            let refined = refine(
                oracle,
                &w0,
                t,
                cfg.epsilon,
                cfg.delta,
                &cfg.refine,
                &mut attempt_rng,
            );
            report.queries.refine += oracle.ledger() - before;
            match refined {
                Ok(out) => {
                    report.rounds += out.rounds;
                    report.candidates.push(Candidate {
                        hypothesis: Hypothesis::Halfspace(Halfspace::new(out.w, out.t_hat)),
                        origin: t,
                        error: None,
                    });
                }
                Err(e) if e.is_budget() => {
                    report.budget_exhausted = true;
                    break 'grid;
                }
                Err(_) => report.failed_attempts += 1,
            }
        }
    }

    // Stage 3: tournament.
    if report.candidates.is_empty() {
        return finish(report, small_class.as_deref());
    }
    let pool: Vec<Hypothesis> = report
        .candidates
        .iter()
        .map(|c| c.hypothesis.clone())
        .collect();
    let before = oracle.ledger();
    let chosen = if report.budget_exhausted {
        pool.len() - 1
    } else {
        match tournament(&pool, oracle, cfg.epsilon, cfg.delta, &cfg.tournament, rng) {
            Ok(out) => out.winner,
            Err(e) if e.is_budget() => {
                report.budget_exhausted = true;
                pool.len() - 1
            }
            Err(e) => return Err(e),
        }
    };
    report.queries.tournament += oracle.ledger() - before;
    report.hypothesis = pool[chosen].clone();
    finish(report, small_class.as_deref())
}

/// Number of accuracy levels `α_i = ε 2^i`.
pub fn ladder_levels(epsilon: f64) -> usize {
    (1.0 / epsilon).log2().ceil().max(0.0) as usize + 1
}

/// Runs [`learn`] at accuracies `ε 2^i` and picks among the outputs with a final tournament.
pub fn learn_with_noise_ladder(
    oracle: &mut MembershipOracle,
    mut small_class: Option<&mut SmallClassOracle>,
    cfg: &LearnerConfig,
    rng: &mut impl Rng,
) -> Result<RunReport> {
    cfg.validate()?;
    let clock = Instant::now();
    let guard = BudgetGuard::install(oracle, cfg.budget);
    let levels = ladder_levels(cfg.epsilon);
    let mut queries = StageQueries::default();
    let mut pooled = Vec::new();
    let mut draws = 0;
    let mut rounds = 0;
    let mut failed = 0;
    let mut exhausted = false;
    for i in 0..levels {
        let alpha = (cfg.epsilon * 2f64.powi(i as i32)).min(0.45);
        let level_cfg = LearnerConfig {
            epsilon: alpha,
            budget: None,
            ..cfg.clone()
        };
        let r = learn(oracle, small_class.as_deref_mut(), &level_cfg, rng)?;
        queries.add(&r.queries);
        draws += r.small_class_draws;
        rounds += r.rounds;
        failed += r.failed_attempts;
        pooled.push(Candidate {
            hypothesis: r.hypothesis,
            origin: alpha,
            error: None,
        });
        if r.budget_exhausted {
            exhausted = true;
            break;
        }
    }
    let hypotheses: Vec<Hypothesis> = pooled.iter().map(|c| c.hypothesis.clone()).collect();
    let before = oracle.ledger();
    let chosen = if exhausted {
        0
    } else {
        match tournament(
            &hypotheses,
            oracle,
            cfg.epsilon,
            cfg.delta,
            &cfg.tournament,
            rng,
        ) {
            Ok(out) => out.winner,
            Err(e) if e.is_budget() => {
                exhausted = true;
                0
            }
            Err(e) => {
                guard.restore(oracle);
                return Err(e);
            }
        }
    };
    queries.tournament += oracle.ledger() - before;
    guard.restore(oracle);
    let hypothesis = hypotheses[chosen].clone();
    Ok(RunReport {
        verdict: verdict_of(&hypothesis),
        hypothesis,
        queries,
        small_class_draws: draws,
        candidates: pooled,
        bias: None,
        grid: Vec::new(),
        rounds,
        failed_attempts: failed,
        labels_flipped: false,
        budget_exhausted: exhausted,
        error: None,
        wall_ms: clock.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UnitVector;

    #[test]
    fn grid_spans_bracket() {
        let g = threshold_grid(0.1, 0.1).unwrap();
        let t_a = threshold_for_bias(0.2).unwrap();
        let t_b = threshold_for_bias(0.1).unwrap();
        assert!((g[0] - t_a).abs() < 1e-12);
        assert_eq!(*g.last().unwrap(), t_b);
        assert!(g
            .windows(2)
            .all(|w| w[1] > w[0] && w[1] - w[0] <= 0.1 + 1e-12));
        assert_eq!(threshold_grid(0.375, 0.1).unwrap()[0], 0.0);
    }

    #[test]
    fn ladder_length() {
        assert_eq!(ladder_levels(0.01), 8);
        assert_eq!(ladder_levels(0.5), 2);
        assert!(small_class_grid(0.01, 0.25)
            .iter()
            .all(|t| *t <= (2.0 * 100f64.ln()).sqrt()));
    }

    #[test]
    fn single_candidate_tournament() {
        let h = Hypothesis::Halfspace(Halfspace::new(UnitVector::basis(2, 0), 0.0));
        let mut o = MembershipOracle::new(
            LabelSource::Clean(Halfspace::new(UnitVector::basis(2, 1), 0.0)),
            1,
        );
        let mut r = rng::stream(1, 0);
        let out = tournament(&[h], &mut o, 0.1, 0.1, &TournamentConfig::default(), &mut r).unwrap();
        assert_eq!((out.winner, out.queries), (0, 0));
        assert_eq!(
            tournament(&[], &mut o, 0.1, 0.1, &TournamentConfig::default(), &mut r).unwrap_err(),
            Error::NoCandidates
        );
    }

    #[test]
    fn antipodal_pair() {
        let target = Halfspace::new(UnitVector::basis(3, 0), 0.0);
        let mut o = MembershipOracle::new(LabelSource::Clean(target.clone()), 2);
        let mut r = rng::stream(2, 0);
        let cands = [
            Hypothesis::Halfspace(target.complement()),
            Hypothesis::Halfspace(target.clone()),
        ];
        let out = tournament(
            &cands,
            &mut o,
            0.05,
            0.05,
            &TournamentConfig::default(),
            &mut r,
        )
        .unwrap();
        assert_eq!(out.winner, 1);
        assert_eq!(out.losses, vec![1, 0]);
    }

    #[test]
    fn extreme_dispatch_rule() {
        let cfg = LearnerConfig::new(0.01, 0.1);
        assert!(!cfg.is_extreme(0.01, 0.45));
        assert!(cfg.is_extreme(0.5, 0.3));
        assert!(cfg.is_extreme(3.0, 0.05));
        assert!(!cfg.is_extreme(3.0, 0.002));
        assert!(!cfg.is_extreme(0.0, 0.002));
    }
}
