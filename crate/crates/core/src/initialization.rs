//! Warm starts for the refinement loop.
//!
//! [`init_unextreme`] finds one negative example `x0` and estimates the Chow
//! vector of the smoothed labels around it. [`init_extreme`] additionally runs
//! [`angle_test`]-guided localized gradient steps for thresholds so large that
//! the smoothed estimate alone is too coarse.

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimation::empirical_projected_chow;
use crate::geometry::{
    halfspace_bias, inv_sqrt_localization_apply, rejection_acceptance, rejection_rate,
    sqrt_localization_apply, threshold_for_bias, Point, UnitVector,
};
use crate::oracles::{MembershipOracle, SmallClassOracle};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct InitConfig {
    /// Smoothed Chow sample size is `⌈multiplier · d · ln(1/ε)⌉`.
    pub chow_sample_multiplier: f64,
    /// Outer iterations of the extreme initializer; `None` means `⌈log₂ ln(1/ε)⌉ + 1`.
    pub extreme_rounds_cap: Option<usize>,
    /// Angle-test rounds `T`; `None` means `max(4, ⌈3 ln(1/δ)⌉)`.
    pub angle_test_repeats: Option<usize>,
    /// Spacing of the `b̂` sweep; `None` means `1/ln(1/ε)`.
    pub grid_step: Option<f64>,
    /// Plain negative search gives up after `factor / p(t)` queries.
    pub negative_search_factor: f64,
    /// Localized negative search gives up after `factor · ln(1/ε)` attempts.
    pub localized_search_factor: f64,
    /// Angle-test per-round sample size is `⌈multiplier · ln(2T/δ) / p(b, s)⌉`.
    pub angle_sample_multiplier: f64,
    /// Hard cap on any single estimation batch of the extreme initializer.
    pub sample_cap: u64,
    /// Localized bias estimate precision is `p̂^{1/4} / divisor`.
    pub bias_precision_divisor: f64,
    /// Extreme gradient sample size is `⌈multiplier · d · ln(d/δ)⌉`.
    pub extreme_grad_multiplier: f64,
    /// Step factor: `μ_i = (1 − 1/c1) σ_i`.
    pub c1: f64,
    /// Contraction: `σ_{i+1} = (1 − 1/c2) σ_i`.
    pub c2: f64,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig {
            chow_sample_multiplier: 30.0,
            extreme_rounds_cap: None,
            angle_test_repeats: None,
            grid_step: None,
            negative_search_factor: 20.0,
            localized_search_factor: 200.0,
            angle_sample_multiplier: 24.0,
            sample_cap: 20_000_000,
            bias_precision_divisor: 100.0,
            extreme_grad_multiplier: 60.0,
            c1: 8.0,
            c2: 16.0,
        }
    }
}

impl InitConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.chow_sample_multiplier,
            self.negative_search_factor,
            self.localized_search_factor,
            self.angle_sample_multiplier,
            self.bias_precision_divisor,
            self.extreme_grad_multiplier,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) || self.sample_cap == 0 {
            return Err(Error::Config(
                "initialization multipliers must be positive".into(),
            ));
        }
        if self.grid_step.is_some_and(|g| !(g > 0.0)) {
            return Err(Error::Config(
                "initialization grid step must be positive".into(),
            ));
        }
        if !(self.c1 > 1.0 && self.c2 > 1.0) {
            return Err(Error::Config(
                "initialization constants must exceed 1".into(),
            ));
        }
        Ok(())
    }

    pub fn repeats_for(&self, delta: f64) -> usize {
        self.angle_test_repeats
            .unwrap_or_else(|| ((3.0 * (1.0 / delta).ln()).ceil() as usize).max(4))
            .max(1)
    }
}

fn log_inv(epsilon: f64) -> f64 {
    (1.0 / epsilon).ln().max(1.0)
}

/// Repeated Gaussian queries until a negative label, at most `cap` of them.
pub fn find_negative(oracle: &mut MembershipOracle, cap: u64, rng: &mut impl Rng) -> Result<Point> {
    let mut x = Point::zeros(oracle.dim());
    for _ in 0..cap {
        rng::fill_gaussian(&mut x, rng);
        if oracle.query(&x)?.is_negative() {
            return Ok(x);
        }
    }
    Err(Error::NoNegativeFound { attempts: cap })
}

/// Smoothed-label warm start for a threshold guess `t ≥ 0`.
pub fn init_unextreme(
    oracle: &mut MembershipOracle,
    small_class: Option<&mut SmallClassOracle>,
    t: f64,
    epsilon: f64,
    delta: f64,
    cfg: &InitConfig,
    rng: &mut impl Rng,
) -> Result<UnitVector> {
    let _ = delta;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "initialization threshold {t} must be finite and ≥ 0"
        )));
    }
    let d = oracle.dim();
    let rho = if t > 1.0 { 1.0 / t } else { 1.0 };
    // With ρ = 1 the anchor point carries no weight and the search is skipped.
    let x0 = if rho < 1.0 {
        match small_class {
            Some(sc) => sc.draw()?,
            None => {
                let cap = (cfg.negative_search_factor / halfspace_bias(t)?).ceil() as u64;
                find_negative(oracle, cap, rng)?
            }
        }
    } else {
        Point::zeros(d)
    };
    let m = (cfg.chow_sample_multiplier * d as f64 * log_inv(epsilon)).ceil() as usize;
    let mut q = |z: &Point| oracle.smoothed_query(&x0, rho, z);
    let u0 = empirical_projected_chow(&mut q, None, d, m, rng)?;
    let norm = u0.norm();
    if norm < 1e-9 {
        return Err(Error::DegenerateChow { norm });
    }
    UnitVector::new(u0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleVerdict {
    Yes,
    No,
}

/// Localized negative probability `Pr(y(A^{1/2} z − s w) = −1)` estimated to relative
/// accuracy around `scale`, by membership queries or through the small-class oracle.
#[allow(clippy::too_many_arguments)]
fn estimate_localized_bias(
    oracle: &mut MembershipOracle,
    small_class: Option<&mut SmallClassOracle>,
    w: &UnitVector,
    s: f64,
    sigma: f64,
    p_hat: f64,
    samples_at_scale: f64,
    cap: u64,
    rng: &mut impl Rng,
) -> Result<f64> {
    match small_class {
        None => {
            let n = samples_at_scale.ceil() as u64;
            if n > cap {
                return Err(Error::SampleCap {
                    stage: "localized bias estimate",
                    needed: n,
                    cap,
                });
            }
            let mut z = Point::zeros(oracle.dim());
            let mut neg = 0u64;
            for _ in 0..n {
                rng::fill_gaussian(&mut z, rng);
                if oracle.localized_query(w, s, sigma, &z)?.is_negative() {
                    neg += 1;
                }
            }
            Ok(neg as f64 / n as f64)
        }
        Some(sc) => {
            // p_s = p q₋ / q, with q₋ the acceptance rate of negatives.
            let q = rejection_rate(s, sigma);
            let n = (samples_at_scale * p_hat / q).ceil().max(1.0) as u64;
            if n > cap {
                return Err(Error::SampleCap {
                    stage: "small-class acceptance estimate",
                    needed: n,
                    cap,
                });
            }
            let mut accepted = 0u64;
            for _ in 0..n {
                let x = sc.draw()?;
                if rng.random::<f64>() < rejection_acceptance(w, s, sigma, &x) {
                    accepted += 1;
                }
            }
            Ok((p_hat * accepted as f64 / n as f64 / q).min(1.0))
        }
    }
}

/// Tests whether `b` approximates `sin θ(w*, w)` using localized bias estimates.
#[allow(clippy::too_many_arguments)]
pub fn angle_test(
    oracle: &mut MembershipOracle,
    mut small_class: Option<&mut SmallClassOracle>,
    w: &UnitVector,
    t: f64,
    b: f64,
    p_hat: f64,
    delta: f64,
    cfg: &InitConfig,
    rng: &mut impl Rng,
) -> Result<AngleVerdict> {
    if !(b > 0.0 && b <= 0.25 + 1e-12) {
        return Err(Error::domain(format!(
            "angle test needs b ∈ (0, 1/4], got {b}"
        )));
    }
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("angle test needs t > 1, got {t}")));
    }
    let a = (1.0 - b * b).sqrt();
    let sigma = 1.0 / t;
    let rounds = cfg.repeats_for(delta);
    let mut count = 0usize;
    for _ in 0..rounds {
        let s = a * t + b * rng.random::<f64>();
        let p_bs = halfspace_bias((t - a * s) / b)?;
        let n = cfg.angle_sample_multiplier * (2.0 * rounds as f64 / delta).ln() / p_bs;
        let p_s = estimate_localized_bias(
            oracle,
            small_class.as_deref_mut(),
            w,
            s,
            sigma,
            p_hat,
            n,
            cfg.sample_cap,
            rng,
        )?;
        if p_s > p_bs / 3.0 {
            count += 1;
        }
    }
    Ok(if 4 * count > 3 * rounds {
        AngleVerdict::Yes
    } else {
        AngleVerdict::No
    })
}

/// Trace of the extreme initializer's outer loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeOutcome {
    pub w: UnitVector,
    /// `σ_i` of every iteration entered.
    pub sigmas: Vec<f64>,
    /// Gradient steps taken.
    pub steps: usize,
}

/// Warm start for thresholds in the extreme regime.
#[allow(clippy::too_many_arguments)]
pub fn init_extreme(
    oracle: &mut MembershipOracle,
    mut small_class: Option<&mut SmallClassOracle>,
    t: f64,
    epsilon: f64,
    p_hat: f64,
    delta: f64,
    cfg: &InitConfig,
    rng: &mut impl Rng,
) -> Result<UnitVector> {
    let w0 = init_unextreme(
        oracle,
        small_class.as_deref_mut(),
        t,
        epsilon,
        delta,
        cfg,
        rng,
    )?;
    Ok(extreme_rounds(oracle, small_class, &w0, t, epsilon, p_hat, delta, cfg, rng)?.w)
}

/// The angle-test-guided loop of the extreme initializer, started from `w0`.
#[allow(clippy::too_many_arguments)]
pub fn extreme_rounds(
    oracle: &mut MembershipOracle,
    mut small_class: Option<&mut SmallClassOracle>,
    w0: &UnitVector,
    t: f64,
    epsilon: f64,
    p_hat: f64,
    delta: f64,
    cfg: &InitConfig,
    rng: &mut impl Rng,
) -> Result<ExtremeOutcome> {
    cfg.validate()?;
    if !(p_hat > 0.0 && p_hat < 1.0) {
        return Err(Error::domain(format!(
            "bias estimate {p_hat} is not in (0, 1)"
        )));
    }
    let d = oracle.dim();
    let lg = log_inv(epsilon);
    let eta = (epsilon / p_hat).min((-0.5f64).exp());
    let mut sigma = eta * (1.0 / eta).ln().sqrt();
    let mut mu = (1.0 - 1.0 / cfg.c1) * sigma;
    let iterations = cfg
        .extreme_rounds_cap
        .unwrap_or_else(|| lg.ln().max(1.0).log2().ceil() as usize + 1);
    let step = cfg.grid_step.unwrap_or(1.0 / lg);
    let grad_m = (cfg.extreme_grad_multiplier * d as f64 * (d as f64 / delta).ln()).ceil() as usize;
    let precision = p_hat.powf(0.25) / cfg.bias_precision_divisor;
    let bias_samples = (2.0 / delta).ln() / (2.0 * precision * precision);
    let search_cap = (cfg.localized_search_factor * lg).ceil() as u64;

    let mut w = w0.clone();
    let mut outcome = ExtremeOutcome {
        w: w.clone(),
        sigmas: Vec::new(),
        steps: 0,
    };
    for _ in 0..iterations {
        outcome.sigmas.push(sigma);
        let max_j = (sigma / step + 1e-9).floor() as usize;
        let mut chosen = None;
        for j in 0..=max_j {
            let b_hat = 2.0 * sigma - j as f64 * step;
            if b_hat < 1.0 / t {
                outcome.w = w;
                return Ok(outcome);
            }
            if b_hat > 0.25 {
                continue;
            }
            let verdict = angle_test(
                oracle,
                small_class.as_deref_mut(),
                &w,
                t,
                b_hat,
                p_hat,
                delta,
                cfg,
                rng,
            )?;
            if verdict == AngleVerdict::Yes {
                chosen = Some(b_hat);
                break;
            }
        }
        let Some(b_hat) = chosen else {
            outcome.w = w;
            return Ok(outcome);
        };

        let a_hat = (1.0 - b_hat * b_hat).sqrt();
        let s = a_hat * t + b_hat * rng.random::<f64>();
        let p_s = estimate_localized_bias(
            oracle,
            small_class.as_deref_mut(),
            &w,
            s,
            1.0 / t,
            p_hat,
            bias_samples,
            cfg.sample_cap,
            rng,
        )?;
        let t_s = threshold_for_bias(p_s.clamp(1e-12, 0.5 - 1e-12))?.max(2.0);
        let sigma_loc = 1.0 / t_s;
        let rho = 1.0 / t_s;

        let z0 = match small_class.as_deref_mut() {
            Some(sc) => localized_negative_from_small_class(sc, &w, s, sigma_loc, search_cap, rng)?,
            None => localized_negative(oracle, &w, s, sigma_loc, search_cap, rng)?,
        };
        let keep = (1.0 - rho * rho).sqrt();
        let mut q = |z: &Point| {
            let zz = &z0 * keep + z * rho;
            oracle.localized_query(&w, s, sigma_loc, &zz)
        };
        let g = empirical_projected_chow(&mut q, Some(&w), d, grad_m, rng)?;
        w = UnitVector::new(w.as_vector() + g * mu)?;
        outcome.steps += 1;
        sigma *= 1.0 - 1.0 / cfg.c2;
        mu = (1.0 - 1.0 / cfg.c1) * sigma;
    }
    outcome.w = w;
    Ok(outcome)
}

fn localized_negative(
    oracle: &mut MembershipOracle,
    w: &UnitVector,
    s: f64,
    sigma: f64,
    cap: u64,
    rng: &mut impl Rng,
) -> Result<Point> {
    let mut z = Point::zeros(oracle.dim());
    for _ in 0..cap {
        rng::fill_gaussian(&mut z, rng);
        if oracle.localized_query(w, s, sigma, &z)?.is_negative() {
            return Ok(z);
        }
    }
    Err(Error::NoNegativeFound { attempts: cap })
}

/// A negative draw passed through the rejection step lands at `A^{1/2} z0 − s w`
/// for a Gaussian `z0`, which is recovered by inverting the map.
fn localized_negative_from_small_class(
    sc: &mut SmallClassOracle,
    w: &UnitVector,
    s: f64,
    sigma: f64,
    cap: u64,
    rng: &mut impl Rng,
) -> Result<Point> {
    for _ in 0..cap {
        let x = sc.draw()?;
        if rng.random::<f64>() < rejection_acceptance(w, s, sigma, &x) {
            let shifted = x + w.as_vector() * s;
            return Ok(inv_sqrt_localization_apply(w, sigma, &shifted));
        }
    }
    Err(Error::NoNegativeFound { attempts: cap })
}

/// `A^{1/2} z − s w`, the point a localized query at `z` lands on.
pub fn localized_point(w: &UnitVector, s: f64, sigma: f64, z: &Point) -> Point {
    let mut x = sqrt_localization_apply(w, sigma, z);
    x.axpy(-s, w.as_vector(), 1.0);
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Halfspace;
    use crate::oracles::LabelSource;

    #[test]
    fn low_threshold_skips_negative_search() {
        let h = Halfspace::new(UnitVector::basis(5, 0), 0.5);
        let mut o = MembershipOracle::new(LabelSource::Clean(h.clone()), 1);
        let mut r = rng::stream(1, 0);
        let cfg = InitConfig::default();
        let w = init_unextreme(&mut o, None, 0.5, 0.01, 0.1, &cfg, &mut r).unwrap();
        let m = (cfg.chow_sample_multiplier * 5.0 * (100.0f64).ln()).ceil() as u64;
        assert_eq!(o.ledger(), m);
        assert!((w.as_vector().norm() - 1.0).abs() < 1e-12);
        assert!(w.sin_half_angle(&h.w) < 0.2);
    }

    #[test]
    fn single_round_angle_test() {
        let h = Halfspace::new(UnitVector::basis(3, 0), 4.0);
        let mut o = MembershipOracle::new(LabelSource::Clean(h.clone()), 2);
        let mut r = rng::stream(2, 0);
        let cfg = InitConfig {
            angle_test_repeats: Some(1),
            ..InitConfig::default()
        };
        let before = o.ledger();
        let v = angle_test(&mut o, None, &h.w, 4.0, 0.2, 3e-5, 0.1, &cfg, &mut r).unwrap();
        // Aligned w with b = 0.2: the localized bias exceeds p(b, s) on every s.
        assert_eq!(v, AngleVerdict::Yes);
        assert!(o.ledger() > before);
        assert!(angle_test(&mut o, None, &h.w, 4.0, 0.3, 3e-5, 0.1, &cfg, &mut r).is_err());
    }

    #[test]
    fn small_class_localized_negative_lands_on_negative() {
        let h = Halfspace::new(UnitVector::from_slice(&[1.0, 0.5, 0.0]).unwrap(), 1.0);
        let src = LabelSource::Clean(h.clone());
        let mut sc = SmallClassOracle::new(src, 3);
        let mut r = rng::stream(3, 0);
        let w = UnitVector::basis(3, 0);
        for _ in 0..20 {
            let z0 =
                localized_negative_from_small_class(&mut sc, &w, 0.8, 0.5, 10_000, &mut r).unwrap();
            assert!(h.eval(&localized_point(&w, 0.8, 0.5, &z0)).is_negative());
        }
    }
}
