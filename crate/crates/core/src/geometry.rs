//! Closed-form Gaussian and halfspace primitives.
//!
//! A halfspace is `sign(w·x + t)` with `w` on the unit sphere and `sign(0) = +1`.
//! Two point transforms keep halfspaces closed:
//!
//! * localization `z ↦ A^{1/2} z − s v` with `A = I − (1 − σ²) v vᵀ`;
//! * smoothing `z ↦ √(1 − ρ²) x0 + ρ z`.
//!
//! [`localize_halfspace`] and [`smoothed_halfspace`] return the halfspace in `z`
//! that the composition computes, exactly.

use std::f64::consts::{FRAC_2_SQRT_PI, SQRT_2};

use nalgebra::DVector;

use crate::error::{Error, Result};

/// A point of `ℝ^d`.
pub type Point = DVector<f64>;

const UNIT_TOL: f64 = 1e-9;
const ALIGNED_TOL: f64 = 1e-12;

/// √(2/π).
pub const SQRT_2_OVER_PI: f64 = FRAC_2_SQRT_PI / SQRT_2;

/// A label in `{−1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// Sign convention with ties going to `Positive`.
    pub fn from_margin(margin: f64) -> Self {
        if margin >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Label::Negative
    }
}

/// A vector on the unit sphere `S^{d−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(DVector<f64>);

impl UnitVector {
    /// Normalizes `v`. Fails on zero or non-finite input.
    pub fn new(v: DVector<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::domain(format!(
                "cannot normalize vector of norm {n}"
            )));
        }
        Ok(UnitVector(v / n))
    }

    /// Wraps a vector that is already unit norm.
    pub fn from_unit(v: DVector<f64>) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!("vector norm {n} is not 1")));
        }
        Ok(UnitVector(v))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    /// The canonical basis vector `e_i` of `ℝ^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d, "basis index {i} out of range for dimension {d}");
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.0
    }

    pub fn dot(&self, x: &DVector<f64>) -> f64 {
        self.0.dot(x)
    }

    pub fn negated(&self) -> Self {
        UnitVector(-&self.0)
    }

    /// `cos θ(self, other)`.
    pub fn cos_angle(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0).clamp(-1.0, 1.0)
    }

    /// `sin(θ/2) = ‖self − other‖ / 2`.
    pub fn sin_half_angle(&self, other: &UnitVector) -> f64 {
        ((&self.0 - &other.0).norm() / 2.0).min(1.0)
    }

    /// `sin θ(self, other)`, computed from half-angle chords.
    pub fn sin_angle(&self, other: &UnitVector) -> f64 {
        let s = (&self.0 - &other.0).norm() / 2.0;
        let c = (&self.0 + &other.0).norm() / 2.0;
        (2.0 * s * c).min(1.0)
    }

    /// The component of `x` orthogonal to `self`.
    pub fn project_out(&self, x: &DVector<f64>) -> DVector<f64> {
        x - &self.0 * self.0.dot(x)
    }
}

/// `h(x) = sign(w·x + t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub w: UnitVector,
    pub t: f64,
}

impl Halfspace {
    pub fn new(w: UnitVector, t: f64) -> Self {
        Halfspace { w, t }
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn margin(&self, x: &DVector<f64>) -> f64 {
        self.w.dot(x) + self.t
    }

    pub fn eval(&self, x: &DVector<f64>) -> Label {
        Label::from_margin(self.margin(x))
    }

    /// `sign(−w·x − t)`; differs from `−h` only on the boundary.
    pub fn complement(&self) -> Self {
        Halfspace {
            w: self.w.negated(),
            t: -self.t,
        }
    }

    /// `Pr_{x∼N(0,I)}(h(x) = −1)`.
    pub fn bias(&self) -> f64 {
        normal_cdf(-self.t)
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal CDF `Φ(x)`.
///
/// Uses `erfc` on `|x| ≤ 8` and the asymptotic Mills-ratio series beyond.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < -8.0 {
        lower_tail_asymptotic(-x)
    } else if x > 8.0 {
        1.0 - lower_tail_asymptotic(x)
    } else {
        0.5 * libm::erfc(-x / SQRT_2)
    }
}

/// `Φ(−x)` for `x > 8`: `φ(x)/x · Σ (−1)^k (2k−1)!! / x^{2k}`.
fn lower_tail_asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=20 {
        term *= -((2 * k - 1) as f64) * inv2;
        sum += term;
    }
    normal_pdf(x) / x * sum
}

/// `p(t) = Φ(−t)`, the probability that `sign(w·x + t) = −1` under `N(0, I)`.
pub fn halfspace_bias(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::domain(format!("threshold {t} is not finite")));
    }
    Ok(normal_cdf(-t))
}

/// The threshold `t` with `Φ(−t) = p`, by bisection.
pub fn threshold_for_bias(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("bias {p} is not in (0, 1)")));
    }
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(-mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Komatsu's sandwich `(lower, upper)` around `Φ(−t)` for `t ≥ 0`.
pub fn komatsu_bounds(t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "Komatsu bounds need finite t ≥ 0, got {t}"
        )));
    }
    let g = SQRT_2_OVER_PI * (-0.5 * t * t).exp();
    Ok((
        g / (t + (t * t + 4.0).sqrt()),
        g / (t + (t * t + 2.0).sqrt()),
    ))
}

/// `E[z h(z)] = √(2/π) e^{−t²/2} w`.
pub fn chow_vector(h: &Halfspace) -> DVector<f64> {
    h.w.as_vector() * (SQRT_2_OVER_PI * (-0.5 * h.t * h.t).exp())
}

/// `sin θ(w1, w2) / 2 · e^{−t²/2}`, which bounds the disagreement mass of the two halfspaces.
pub fn disagreement_bound(w1: &UnitVector, w2: &UnitVector, t: f64) -> f64 {
    w1.sin_angle(w2) / 2.0 * (-0.5 * t * t).exp()
}

/// `target = a·reference + b·u` with `b ≥ 0` and `u ⊥ reference`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleDecomposition {
    pub a: f64,
    pub b: f64,
    pub u: UnitVector,
}

impl AngleDecomposition {
    pub fn is_aligned(&self) -> bool {
        self.b == 0.0
    }

    pub fn reconstruct(&self, reference: &UnitVector) -> DVector<f64> {
        reference.as_vector() * self.a + self.u.as_vector() * self.b
    }
}

/// Splits `target` into its components along and orthogonal to `reference`.
///
/// When the two are (anti)parallel, `b = 0` and `u` is the first basis vector with
/// small overlap with `reference`, Gram–Schmidt'd against it. In dimension one no
/// orthogonal direction exists and `u` is `reference` itself.
pub fn decompose(target: &UnitVector, reference: &UnitVector) -> AngleDecomposition {
    let a = target.cos_angle(reference);
    let residual = target.as_vector() - reference.as_vector() * a;
    let b = residual.norm();
    if b > ALIGNED_TOL {
        let b_exact = (1.0 - a * a).max(0.0).sqrt();
        return AngleDecomposition {
            a,
            b: if b_exact > 0.0 { b_exact } else { b },
            u: UnitVector(residual / b),
        };
    }
    AngleDecomposition {
        a: a.signum(),
        b: 0.0,
        u: fallback_orthogonal(reference),
    }
}

fn fallback_orthogonal(reference: &UnitVector) -> UnitVector {
    let d = reference.dim();
    if d == 1 {
        return reference.clone();
    }
    let i = (0..d)
        .find(|&i| reference.0[i].abs() <= std::f64::consts::FRAC_1_SQRT_2)
        .expect("some coordinate of a unit vector in d ≥ 2 is at most 1/√2");
    let e = UnitVector::basis(d, i);
    UnitVector::new(reference.project_out(e.as_vector())).expect("nonzero by choice of i")
}

/// `A^{1/2} z = z − (1 − σ)(v·z) v`.
pub fn sqrt_localization_apply(v: &UnitVector, sigma: f64, z: &DVector<f64>) -> DVector<f64> {
    debug_assert!(sigma > 0.0 && sigma <= 1.0);
    z - v.as_vector() * ((1.0 - sigma) * v.dot(z))
}

/// `A^{−1/2} x = x − (1 − 1/σ)(v·x) v`.
pub fn inv_sqrt_localization_apply(v: &UnitVector, sigma: f64, x: &DVector<f64>) -> DVector<f64> {
    debug_assert!(sigma > 0.0 && sigma <= 1.0);
    x - v.as_vector() * ((1.0 - 1.0 / sigma) * v.dot(x))
}

/// The halfspace `z ↦ h(A^{1/2} z − s v)`.
pub fn localize_halfspace(h: &Halfspace, v: &UnitVector, s: f64, sigma: f64) -> Result<Halfspace> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::domain(format!(
            "localization scale {sigma} is not in (0, 1)"
        )));
    }
    let a = h.w.dot(v.as_vector());
    let along = v.as_vector() * a;
    let raw = &along + (h.w.as_vector() - &along) / sigma;
    let norm = raw.norm();
    Ok(Halfspace {
        w: UnitVector(raw / norm),
        t: (h.t - a * s) / sigma / norm,
    })
}

/// The halfspace `z ↦ h(√(1 − ρ²) x0 + ρ z)`.
pub fn smoothed_halfspace(h: &Halfspace, x0: &DVector<f64>, rho: f64) -> Result<Halfspace> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain(format!(
            "smoothing parameter {rho} is not in (0, 1]"
        )));
    }
    let keep = (1.0 - rho * rho).sqrt();
    Ok(Halfspace {
        w: h.w.clone(),
        t: (h.t + keep * h.w.dot(x0)) / rho,
    })
}

/// Acceptance probability of the rejection step that turns `x ∼ N(0, I)` into
/// `N(−s v, A)`: `exp(−(σ⁻² − 1)(v·x + s/(1 − σ²))² / 2)`.
pub fn rejection_acceptance(v: &UnitVector, s: f64, sigma: f64, x: &DVector<f64>) -> f64 {
    debug_assert!(sigma > 0.0 && sigma < 1.0);
    let shifted = v.dot(x) + s / (1.0 - sigma * sigma);
    (-0.5 * (1.0 / (sigma * sigma) - 1.0) * shifted * shifted).exp()
}

/// Unconditional acceptance rate of [`rejection_acceptance`]: `σ exp(−s² / (2(1 − σ²)))`.
pub fn rejection_rate(s: f64, sigma: f64) -> f64 {
    sigma * (-s * s / (2.0 * (1.0 - sigma * sigma))).exp()
}
