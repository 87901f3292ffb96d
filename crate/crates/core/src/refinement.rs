//! Localized projected gradient descent on the sphere.
//!
//! Each round keeps an iterate `w_i` and a scale `σ_i` meant to upper-bound
//! `sin(θ(w_i, w*)/2)`. A bisection finds a localization offset `t̃` where the
//! localized negative-label rate sits inside the bias window; the projected
//! Chow vector of the localized labels then points from `w_i` towards `w*`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimation::{
    empirical_projected_chow, probability_window_check, Side, Window, WindowVerdict,
};
use crate::geometry::{Point, UnitVector};
use crate::oracles::MembershipOracle;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct RefineConfig {
    /// Step divisor: `μ_i = σ_i / c1`.
    pub c1: f64,
    /// Contraction: `σ_{i+1} = (1 − 1/c2) σ_i`.
    pub c2: f64,
    /// Stop scale `σ_T = c_stop · ε · e^{t′²/2}`.
    pub c_stop: f64,
    pub grad_samples_multiplier: f64,
    pub bias_window: Window,
    pub max_bisection_steps: usize,
    /// Starting scale; `None` means `min(1/t′, 1/2)`.
    pub sigma0: Option<f64>,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            c1: 8.01,
            c2: 48.0,
            c_stop: 1.0,
            grad_samples_multiplier: 60.0,
            bias_window: Window { lo: 0.02, hi: 0.98 },
            max_bisection_steps: 40,
            sigma0: None,
        }
    }
}

impl RefineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 8.0 && self.c2 > 8.0) {
            return Err(Error::Config(format!(
                "refinement constants must exceed 8 (c1 = {}, c2 = {})",
                self.c1, self.c2
            )));
        }
        if !(self.c_stop > 0.0
            && self.grad_samples_multiplier > 0.0
            && self.max_bisection_steps > 0)
        {
            return Err(Error::Config(
                "refinement multipliers must be positive".into(),
            ));
        }
        if let Some(s) = self.sigma0 {
            if !(s > 0.0 && s <= 0.5) {
                return Err(Error::Config(format!("sigma0 = {s} is not in (0, 1/2]")));
            }
        }
        Window::new(self.bias_window.lo, self.bias_window.hi).map(|_| ())
    }

    pub fn initial_sigma(&self, t_prime: f64) -> f64 {
        self.sigma0
            .unwrap_or(if t_prime > 2.0 { 1.0 / t_prime } else { 0.5 })
    }

    /// `σ_T`, capped at `sigma0`.
    pub fn final_sigma(&self, sigma0: f64, t_prime: f64, epsilon: f64) -> f64 {
        sigma0.min(self.c_stop * epsilon * (0.5 * t_prime * t_prime).exp())
    }

    /// `⌈ln(σ0/σ_T) / −ln(1 − 1/c2)⌉`, at least one.
    pub fn round_count(&self, sigma0: f64, sigma_t: f64) -> usize {
        let decay = -(1.0 - 1.0 / self.c2).ln();
        ((sigma0 / sigma_t).ln() / decay - 1e-9).ceil().max(1.0) as usize
    }

    /// `⌈multiplier · d · ln(d(T + 1)/δ)⌉`.
    pub fn gradient_samples(&self, d: usize, rounds: usize, delta: f64) -> usize {
        let df = d as f64;
        (self.grad_samples_multiplier * df * (df * (rounds as f64 + 1.0) / delta).ln()).ceil()
            as usize
    }
}

/// Iterate of the refinement loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineState {
    pub w: UnitVector,
    pub sigma: f64,
    pub round: usize,
    /// Offset accepted in the last completed round.
    pub accepted_offset: Option<f64>,
    /// Oracle ledger when this state was produced.
    pub ledger: u64,
}

impl RefineState {
    pub fn new(w: UnitVector, sigma: f64, ledger: u64) -> Self {
        RefineState {
            w,
            sigma,
            round: 0,
            accepted_offset: None,
            ledger,
        }
    }
}

/// Bisection over `t̃ ∈ [0, t′]` for an offset whose localized negative rate is in the window.
pub fn search_offset(
    oracle: &mut MembershipOracle,
    w: &UnitVector,
    sigma: f64,
    t_prime: f64,
    cfg: &RefineConfig,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 0.5) || !(t_prime >= 0.0) {
        return Err(Error::domain(format!(
            "offset search needs σ ∈ (0, 1/2] and t′ ≥ 0 (σ = {sigma}, t′ = {t_prime})"
        )));
    }
    let mut z = Point::zeros(oracle.dim());
    let (mut lo, mut hi) = (0.0, t_prime);
    for step in 0..cfg.max_bisection_steps {
        let mid = 0.5 * (lo + hi);
        let mut sampler = || {
            rng::fill_gaussian(&mut z, rng);
            oracle.localized_query(w, mid, sigma, &z)
        };
        let verdict = probability_window_check(&mut sampler, cfg.bias_window, delta)?;
        match verdict {
            WindowVerdict::InWindow => return Ok(mid),
            _ if verdict.side() == Some(Side::Low) => lo = mid,
            _ => hi = mid,
        }
        if hi - lo < sigma / 4.0 {
            return Err(Error::OffsetNotFound { steps: step + 1 });
        }
    }
    Err(Error::OffsetNotFound {
        steps: cfg.max_bisection_steps,
    })
}

/// What one round did.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub before: RefineState,
    pub after: RefineState,
    pub offset: f64,
    pub gradient_norm: f64,
    pub step_norm: f64,
}

/// One localized gradient step from `state`.
pub fn refine_round(
    oracle: &mut MembershipOracle,
    state: &RefineState,
    t_prime: f64,
    cfg: &RefineConfig,
    grad_samples: usize,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<RoundRecord> {
    let probe_delta = delta / (2.0 * cfg.max_bisection_steps as f64);
    let offset = search_offset(
        oracle,
        &state.w,
        state.sigma,
        t_prime,
        cfg,
        probe_delta,
        rng,
    )?;
    let d = oracle.dim();
    let (w, sigma) = (&state.w, state.sigma);
    let mut q = |z: &Point| oracle.localized_query(w, offset, sigma, z);
    let g = empirical_projected_chow(&mut q, Some(w), d, grad_samples, rng)?;
    let next = UnitVector::new(w.as_vector() + &g * (sigma / cfg.c1))?;
    let step_norm = (next.as_vector() - w.as_vector()).norm();
    let after = RefineState {
        w: next,
        sigma: sigma * (1.0 - 1.0 / cfg.c2),
        round: state.round + 1,
        accepted_offset: Some(offset),
        ledger: oracle.ledger(),
    };
    Ok(RoundRecord {
        before: state.clone(),
        after,
        offset,
        gradient_norm: g.norm(),
        step_norm,
    })
}

/// Result of a full refinement run.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineOutcome {
    pub w: UnitVector,
    /// Last accepted offset, the threshold estimate.
    pub t_hat: f64,
    pub rounds: usize,
    pub final_sigma: f64,
    pub queries: u64,
}

/// Runs rounds from `w0` until `σ` reaches `σ_T`.
pub fn refine(
    oracle: &mut MembershipOracle,
    w0: &UnitVector,
    t_prime: f64,
    epsilon: f64,
    delta: f64,
    cfg: &RefineConfig,
    rng: &mut impl Rng,
) -> Result<RefineOutcome> {
    refine_observed(oracle, w0, t_prime, epsilon, delta, cfg, rng, &mut |_| {})
}

/// [`refine`] with a callback after every round.
#[allow(clippy::too_many_arguments)]
pub fn refine_observed(
    oracle: &mut MembershipOracle,
    w0: &UnitVector,
    t_prime: f64,
    epsilon: f64,
    delta: f64,
    cfg: &RefineConfig,
    rng: &mut impl Rng,
    observer: &mut dyn FnMut(&RoundRecord),
) -> Result<RefineOutcome> {
    cfg.validate()?;
    let t_prime = t_prime.max(0.0);
    let start = oracle.ledger();
    let sigma0 = cfg.initial_sigma(t_prime);
    let sigma_t = cfg.final_sigma(sigma0, t_prime, epsilon);
    let rounds = cfg.round_count(sigma0, sigma_t);
    let m = cfg.gradient_samples(oracle.dim(), rounds, delta);
    let round_delta = delta / (rounds as f64 + 1.0);
    let mut state = RefineState::new(w0.clone(), sigma0, start);
    for _ in 0..rounds {
        let record = refine_round(oracle, &state, t_prime, cfg, m, round_delta, rng)?;
        observer(&record);
        state = record.after;
    }
    Ok(RefineOutcome {
        t_hat: state.accepted_offset.unwrap_or(t_prime),
        w: state.w,
        rounds,
        final_sigma: state.sigma,
        queries: oracle.ledger() - start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Halfspace;
    use crate::oracles::{LabelSource, WhiteBoxView};

    #[test]
    fn round_count_arithmetic() {
        let cfg = RefineConfig {
            c2: 16.0,
            ..RefineConfig::default()
        };
        assert_eq!(cfg.round_count(0.5, 0.01), 61);
        assert_eq!(cfg.round_count(0.5, 0.5), 1);
    }

    #[test]
    fn aligned_offset_near_truth() {
        let h = Halfspace::new(UnitVector::basis(4, 0), 1.5);
        let src = LabelSource::Clean(h.clone());
        let mut o = MembershipOracle::new(src.clone(), 1);
        let mut r = rng::stream(1, 3);
        let cfg = RefineConfig::default();
        let t = search_offset(&mut o, &h.w, 0.1, 1.5, &cfg, 0.01, &mut r).unwrap();
        assert!((t - 1.5).abs() <= 40.0 * 0.1);
        let view = WhiteBoxView::new(&src);
        assert!(view.localized_threshold(&h.w, 0.1, t).abs() < 6.0);
    }

    #[test]
    fn sigma_shrinks_even_with_zero_gradient() {
        // Labels never depend on the orthogonal directions in d = 1.
        let h = Halfspace::new(UnitVector::basis(1, 0), 0.0);
        let mut o = MembershipOracle::new(LabelSource::Clean(h.clone()), 2);
        let mut r = rng::stream(2, 0);
        let cfg = RefineConfig::default();
        let s = RefineState::new(h.w.clone(), 0.4, 0);
        let rec = refine_round(&mut o, &s, 0.0, &cfg, 100, 0.1, &mut r).unwrap();
        assert_eq!(rec.after.w, h.w);
        assert!((rec.after.sigma - 0.4 * (1.0 - 1.0 / cfg.c2)).abs() < 1e-15);
        assert_eq!(rec.after.round, 1);
    }

    #[test]
    fn far_offset_fails_cleanly() {
        let h = Halfspace::new(UnitVector::basis(3, 0), 3.0);
        let mut o = MembershipOracle::new(LabelSource::Clean(h.clone()), 3);
        let mut r = rng::stream(3, 0);
        let cfg = RefineConfig::default();
        let err = search_offset(&mut o, &h.w, 0.1, 1.0, &cfg, 0.01, &mut r).unwrap_err();
        assert!(matches!(err, Error::OffsetNotFound { .. }));
    }
}
