//! Query-frugal estimators: bias doubling, probability window checks and
//! empirical (projected) Chow vectors.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Label, Point, UnitVector};
use crate::oracles::MembershipOracle;
use crate::rng;

/// Ratio between consecutive ladder levels.
pub const LADDER_RATIO: f64 = 0.8;

/// The estimator asserts `p̂ ≤ p̄ ≤ BRACKET_CONSTANT · p̂` on a bracket verdict.
pub const BRACKET_CONSTANT: f64 = 4.0;

/// Knobs of [`estimate_bias_doubling`].
#[derive(Debug, Clone, PartialEq)]
pub struct BiasConfig {
    /// Per-repetition sample size is `⌈samples_per_inverse_bias / level + min_samples⌉`.
    pub samples_per_inverse_bias: f64,
    pub min_samples: usize,
    /// Majority-vote repetitions per level; `None` means `⌈2 ln(1/δ)⌉` rounded up to odd.
    pub repetitions: Option<usize>,
    /// The ladder stops with [`BiasVerdict::Small`] once the level drops to `stop_constant · ε`.
    pub stop_constant: f64,
    pub max_queries: u64,
}

impl Default for BiasConfig {
    fn default() -> Self {
        BiasConfig {
            samples_per_inverse_bias: 100.0,
            min_samples: 1000,
            repetitions: None,
            stop_constant: 4.0,
            max_queries: 200_000_000,
        }
    }
}

impl BiasConfig {
    pub fn repetitions_for(&self, delta: f64) -> usize {
        let r = self
            .repetitions
            .unwrap_or_else(|| (2.0 * (1.0 / delta).ln()).ceil().max(1.0) as usize);
        r | 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BiasVerdict {
    /// The negative-label probability lies in `[p_hat, BRACKET_CONSTANT · p_hat]`.
    Bracket { p_hat: f64 },
    /// The negative-label probability is at most `stop_constant · ε`.
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasEstimate {
    pub verdict: BiasVerdict,
    pub queries_used: u64,
    /// Number of ladder levels tested.
    pub levels: usize,
    /// Empirical negative fraction over the first level.
    pub first_level_negative_fraction: f64,
}

/// Estimates `p̄ = Pr(y(x) = −1)` to a constant factor with `Õ(1/p̄)` queries.
///
/// Walks the ladder `ℓ_i = 0.8^i / 2`. At each level a majority of repetitions
/// must see a negative frequency of at least `5ℓ_i/6` to stop; the reported
/// `p̂ = 3ℓ_i/4` sits just below the acceptance threshold.
pub fn estimate_bias_doubling(
    oracle: &mut MembershipOracle,
    epsilon: f64,
    delta: f64,
    cfg: &BiasConfig,
    rng: &mut impl Rng,
) -> Result<BiasEstimate> {
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    let start = oracle.ledger();
    let reps = cfg.repetitions_for(delta);
    let majority = reps / 2 + 1;
    let mut x = DVector::zeros(oracle.dim());
    let mut first_fraction = f64::NAN;
    let mut level = 0.5;
    let mut levels = 0;

    while level > cfg.stop_constant * epsilon {
        let n = (cfg.samples_per_inverse_bias / level + cfg.min_samples as f64).ceil() as u64;
        let (mut passes, mut fails) = (0, 0);
        let (mut neg_total, mut seen_total) = (0u64, 0u64);
        while passes < majority && fails < majority {
            if oracle.ledger() - start + n > cfg.max_queries {
                return Err(Error::SampleCap {
                    stage: "bias doubling",
                    needed: oracle.ledger() - start + n,
                    cap: cfg.max_queries,
                });
            }
            let mut neg = 0u64;
            for _ in 0..n {
                rng::fill_gaussian(&mut x, rng);
                if oracle.query(&x)?.is_negative() {
                    neg += 1;
                }
            }
            neg_total += neg;
            seen_total += n;
            if neg as f64 >= 5.0 * level / 6.0 * n as f64 {
                passes += 1;
            } else {
                fails += 1;
            }
        }
        if levels == 0 {
            first_fraction = neg_total as f64 / seen_total as f64;
        }
        levels += 1;
        if passes >= majority {
            return Ok(BiasEstimate {
                verdict: BiasVerdict::Bracket {
                    p_hat: 0.75 * level,
                },
                queries_used: oracle.ledger() - start,
                levels,
                first_level_negative_fraction: first_fraction,
            });
        }
        level *= LADDER_RATIO;
    }
    Ok(BiasEstimate {
        verdict: BiasVerdict::Small,
        queries_used: oracle.ledger() - start,
        levels,
        first_level_negative_fraction: first_fraction,
    })
}

/// An open probability interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(Error::domain(format!(
                "window ({lo}, {hi}) is not inside (0, 1)"
            )));
        }
        Ok(Window { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Guarantee margin, a quarter of the width.
    pub fn margin(&self) -> f64 {
        self.width() / 4.0
    }

    /// Sample size giving a Hoeffding radius of half the margin w.p. `1 − δ`.
    pub fn sample_size(&self, delta: f64) -> usize {
        (32.0 / (self.width() * self.width()) * (4.0 / delta).ln()).ceil() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowVerdict {
    InWindow,
    Outside(Side),
    /// The estimate fell in a margin band; carries the nearer edge.
    Inconclusive(Side),
}

impl WindowVerdict {
    pub fn side(&self) -> Option<Side> {
        match *self {
            WindowVerdict::InWindow => None,
            WindowVerdict::Outside(s) | WindowVerdict::Inconclusive(s) => Some(s),
        }
    }
}

/// Three-way decision for an empirical frequency `p_hat`.
pub fn classify_window(p_hat: f64, window: Window) -> WindowVerdict {
    let half = window.margin() / 2.0;
    let mid = 0.5 * (window.lo + window.hi);
    let side = if p_hat < mid { Side::Low } else { Side::High };
    if p_hat >= window.lo + half && p_hat <= window.hi - half {
        WindowVerdict::InWindow
    } else if p_hat < window.lo - half || p_hat > window.hi + half {
        WindowVerdict::Outside(side)
    } else {
        WindowVerdict::Inconclusive(side)
    }
}

/// Decides whether `Pr(sampler() = −1)` lies in `window`.
pub fn probability_window_check(
    sampler: &mut dyn FnMut() -> Result<Label>,
    window: Window,
    delta: f64,
) -> Result<WindowVerdict> {
    check_unit_interval("delta", delta)?;
    let n = window.sample_size(delta);
    let mut neg = 0usize;
    for _ in 0..n {
        if sampler()?.is_negative() {
            neg += 1;
        }
    }
    Ok(classify_window(neg as f64 / n as f64, window))
}

/// `(1/m) Σ proj_{exclude⊥}(z_j) · y_j` over fresh `z_j ∼ N(0, I_d)`, `y_j = query(z_j)`.
pub fn empirical_projected_chow(
    query: &mut dyn FnMut(&Point) -> Result<Label>,
    exclude: Option<&UnitVector>,
    d: usize,
    m: usize,
    rng: &mut impl Rng,
) -> Result<DVector<f64>> {
    if m == 0 {
        return Err(Error::domain("Chow estimate needs m ≥ 1"));
    }
    let mut z = DVector::zeros(d);
    let mut acc = DVector::zeros(d);
    for _ in 0..m {
        rng::fill_gaussian(&mut z, rng);
        acc.axpy(query(&z)?.sign(), &z, 1.0);
    }
    acc /= m as f64;
    Ok(match exclude {
        Some(v) => {
            let once = v.project_out(&acc);
            v.project_out(&once)
        }
        None => acc,
    })
}

pub(crate) fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} is not in (0, 1)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{chow_vector, Halfspace};
    use crate::oracles::LabelSource;

    fn oracle(d: usize, t: f64, seed: u64) -> MembershipOracle {
        MembershipOracle::new(
            LabelSource::Clean(Halfspace::new(UnitVector::basis(d, 0), t)),
            seed,
        )
    }

    #[test]
    fn half_bias_stops_at_first_level() {
        let mut o = oracle(3, 0.0, 1);
        let mut r = rng::stream(1, 0);
        let est =
            estimate_bias_doubling(&mut o, 0.01, 0.05, &BiasConfig::default(), &mut r).unwrap();
        assert_eq!(est.levels, 1);
        assert_eq!(est.verdict, BiasVerdict::Bracket { p_hat: 0.375 });
        assert_eq!(est.queries_used, o.ledger());
        assert!((est.first_level_negative_fraction - 0.5).abs() < 0.05);
    }

    #[test]
    fn always_positive_is_small() {
        let mut o = oracle(3, 50.0, 2);
        let mut r = rng::stream(2, 0);
        let est =
            estimate_bias_doubling(&mut o, 0.05, 0.1, &BiasConfig::default(), &mut r).unwrap();
        assert_eq!(est.verdict, BiasVerdict::Small);
    }

    #[test]
    fn window_verdicts() {
        let w = Window::new(0.05, 0.95).unwrap();
        assert_eq!(classify_window(0.5, w), WindowVerdict::InWindow);
        assert_eq!(
            classify_window(0.001, w),
            WindowVerdict::Inconclusive(Side::Low)
        );
        let narrow = Window::new(0.4, 0.6).unwrap();
        assert_eq!(
            classify_window(0.001, narrow),
            WindowVerdict::Outside(Side::Low)
        );
        assert_eq!(
            classify_window(0.99, narrow),
            WindowVerdict::Outside(Side::High)
        );
        assert!(Window::new(0.6, 0.4).is_err());
    }

    #[test]
    fn projected_chow_is_orthogonal_and_kills_signal() {
        let h = Halfspace::new(UnitVector::basis(5, 1), 0.3);
        let mut r = rng::stream(3, 0);
        let mut q = |z: &Point| Ok(h.eval(z));
        let g = empirical_projected_chow(&mut q, Some(&h.w), 5, 20_000, &mut r).unwrap();
        assert!(g.dot(h.w.as_vector()).abs() < 1e-9);
        assert!(g.norm() < 4.0 * (5.0f64 / 20_000.0).sqrt());
        let full = empirical_projected_chow(&mut q, None, 5, 20_000, &mut r).unwrap();
        assert!((full - chow_vector(&h)).norm() < 4.0 * (5.0f64 / 20_000.0).sqrt());
    }
}
