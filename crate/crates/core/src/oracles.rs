//! Simulated labeling functions and the query interfaces the learner sees.
//!
//! A [`LabelSource`] is the hidden ground truth. The learner only ever holds a
//! [`MembershipOracle`] (and optionally a [`SmallClassOracle`]), neither of which
//! exposes the source. Tests and reports inspect the truth through a
//! [`WhiteBoxView`] built separately from the same source.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    decompose, normal_cdf, sqrt_localization_apply, AngleDecomposition, Halfspace, Label, Point,
    UnitVector,
};
use crate::rng::{self, keys, StreamRng};

/// Anything that maps a point to a label.
pub trait Classifier {
    fn classify(&self, x: &Point) -> Label;
}

impl Classifier for Halfspace {
    fn classify(&self, x: &Point) -> Label {
        self.eval(x)
    }
}

/// A region whose labels get flipped by [`LabelSource::RegionFlip`].
#[derive(Clone)]
pub enum Region {
    /// `lo ≤ x[axis] ≤ hi`.
    CoordinateSlab {
        axis: usize,
        lo: f64,
        hi: f64,
    },
    Custom(Arc<dyn Fn(&Point) -> bool + Send + Sync>),
}

impl Region {
    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Region::CoordinateSlab { axis, lo, hi } => {
                let v = x[*axis];
                *lo <= v && v <= *hi
            }
            Region::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::CoordinateSlab { axis, lo, hi } => f
                .debug_struct("CoordinateSlab")
                .field("axis", axis)
                .field("lo", lo)
                .field("hi", hi)
                .finish(),
            Region::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A randomized labeling function `y(x)` built around a target halfspace.
#[derive(Debug, Clone)]
pub enum LabelSource {
    Clean(Halfspace),
    /// Each label is flipped independently with probability `rate`.
    RandomFlip {
        target: Halfspace,
        rate: f64,
    },
    /// Labels flipped wherever `|w*·x + t*| ≤ half_width`.
    BoundaryBand {
        target: Halfspace,
        half_width: f64,
    },
    /// Labels flipped inside an arbitrary region.
    RegionFlip {
        target: Halfspace,
        region: Region,
    },
}

impl LabelSource {
    pub fn random_flip(target: Halfspace, rate: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&rate) {
            return Err(Error::domain(format!(
                "flip rate {rate} is not in [0, 1/2)"
            )));
        }
        Ok(LabelSource::RandomFlip { target, rate })
    }

    pub fn boundary_band(target: Halfspace, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::domain(format!(
                "band half-width {half_width} must be positive"
            )));
        }
        Ok(LabelSource::BoundaryBand { target, half_width })
    }

    pub fn target(&self) -> &Halfspace {
        match self {
            LabelSource::Clean(h) => h,
            LabelSource::RandomFlip { target, .. }
            | LabelSource::BoundaryBand { target, .. }
            | LabelSource::RegionFlip { target, .. } => target,
        }
    }

    pub fn dim(&self) -> usize {
        self.target().dim()
    }

    /// One sample of `y(x)`.
    pub fn label(&self, x: &Point, rng: &mut impl Rng) -> Label {
        let clean = self.target().eval(x);
        match self {
            LabelSource::Clean(_) => clean,
            LabelSource::RandomFlip { rate, .. } => {
                if rng.random::<f64>() < *rate {
                    clean.flipped()
                } else {
                    clean
                }
            }
            LabelSource::BoundaryBand { target, half_width } => {
                if target.margin(x).abs() <= *half_width {
                    clean.flipped()
                } else {
                    clean
                }
            }
            LabelSource::RegionFlip { region, .. } => {
                if region.contains(x) {
                    clean.flipped()
                } else {
                    clean
                }
            }
        }
    }

    /// Error of the target under this source, when known in closed form.
    pub fn opt(&self) -> Option<f64> {
        match self {
            LabelSource::Clean(_) => Some(0.0),
            LabelSource::RandomFlip { rate, .. } => Some(*rate),
            LabelSource::BoundaryBand { target, half_width } => {
                Some(normal_cdf(-target.t + half_width) - normal_cdf(-target.t - half_width))
            }
            LabelSource::RegionFlip { .. } => None,
        }
    }
}

/// Membership-query access to a hidden [`LabelSource`], with an exact query ledger.
#[derive(Debug)]
pub struct MembershipOracle {
    source: LabelSource,
    rng: StreamRng,
    ledger: u64,
    budget: Option<u64>,
    flip: bool,
}

impl MembershipOracle {
    /// Label randomness is drawn from the oracle stream of `seed`.
    pub fn new(source: LabelSource, seed: u64) -> Self {
        MembershipOracle {
            source,
            rng: rng::stream(seed, keys::ORACLE_LABELS),
            ledger: 0,
            budget: None,
            flip: false,
        }
    }

    /// Refuse queries once the ledger reaches `budget`.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn ledger(&self) -> u64 {
        self.ledger
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Replace the ledger cap; `None` removes it.
    pub fn set_budget(&mut self, budget: Option<u64>) {
        self.budget = budget;
    }

    /// Report every label negated from now on.
    pub(crate) fn set_label_flip(&mut self, flip: bool) {
        self.flip = flip;
    }

    pub fn query(&mut self, x: &Point) -> Result<Label> {
        debug_assert_eq!(x.len(), self.dim());
        if let Some(budget) = self.budget {
            if self.ledger >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        self.ledger += 1;
        let y = self.source.label(x, &mut self.rng);
        Ok(if self.flip { y.flipped() } else { y })
    }

    /// Query at `A^{1/2} z − s v` with `A = I − (1 − σ²) v vᵀ`.
    pub fn localized_query(
        &mut self,
        v: &UnitVector,
        s: f64,
        sigma: f64,
        z: &Point,
    ) -> Result<Label> {
        let mut x = sqrt_localization_apply(v, sigma, z);
        x.axpy(-s, v.as_vector(), 1.0);
        self.query(&x)
    }

    /// Query at `√(1 − ρ²) x0 + ρ z`.
    pub fn smoothed_query(&mut self, x0: &Point, rho: f64, z: &Point) -> Result<Label> {
        let x = x0 * (1.0 - rho * rho).sqrt() + z * rho;
        self.query(&x)
    }
}

/// Default rejection cap for [`SmallClassOracle::draw`].
pub const SMALL_CLASS_ATTEMPT_CAP: u64 = 100_000_000;

/// Draws Gaussian points conditioned on a negative label.
#[derive(Debug)]
pub struct SmallClassOracle {
    source: LabelSource,
    rng: StreamRng,
    draws: u64,
    attempt_cap: u64,
}

impl SmallClassOracle {
    pub fn new(source: LabelSource, seed: u64) -> Self {
        SmallClassOracle {
            source,
            rng: rng::stream(seed, keys::SMALL_CLASS),
            draws: 0,
            attempt_cap: SMALL_CLASS_ATTEMPT_CAP,
        }
    }

    pub fn with_attempt_cap(mut self, cap: u64) -> Self {
        self.attempt_cap = cap.max(1);
        self
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// Number of points returned so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn draw(&mut self) -> Result<Point> {
        let d = self.dim();
        let mut x = DVector::zeros(d);
        for _ in 0..self.attempt_cap {
            rng::fill_gaussian(&mut x, &mut self.rng);
            if self.source.label(&x, &mut self.rng).is_negative() {
                self.draws += 1;
                return Ok(x);
            }
        }
        Err(Error::SmallClassUnreachable {
            attempts: self.attempt_cap,
        })
    }
}

/// Ground-truth diagnostics. Never handed to the learner.
#[derive(Debug, Clone)]
pub struct WhiteBoxView {
    target: Halfspace,
    opt: Option<f64>,
}

impl WhiteBoxView {
    pub fn new(source: &LabelSource) -> Self {
        WhiteBoxView {
            target: source.target().clone(),
            opt: source.opt(),
        }
    }

    pub fn target(&self) -> &Halfspace {
        &self.target
    }

    pub fn opt(&self) -> Option<f64> {
        self.opt
    }

    /// `sin(θ(w, w*)/2)`.
    pub fn sin_half_angle(&self, w: &UnitVector) -> f64 {
        w.sin_half_angle(&self.target.w)
    }

    /// `w* = a w + b u`.
    pub fn decomposition(&self, w: &UnitVector) -> AngleDecomposition {
        decompose(&self.target.w, w)
    }

    /// `T = (t* − a t̃) / (σ √(a² + b²/σ²))`, the threshold of the localized target.
    pub fn localized_threshold(&self, w: &UnitVector, sigma: f64, offset: f64) -> f64 {
        let AngleDecomposition { a, b, .. } = self.decomposition(w);
        (self.target.t - a * offset) / (sigma * (a * a + b * b / (sigma * sigma)).sqrt())
    }

    /// Negative-label probability of the localized clean target.
    pub fn localized_bias(&self, w: &UnitVector, sigma: f64, offset: f64) -> f64 {
        normal_cdf(-self.localized_threshold(w, sigma, offset))
    }
}

/// A Monte Carlo error estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub err: f64,
    pub se: f64,
    pub samples: usize,
}

/// `Pr_{x∼N(0,I)}(h(x) ≠ y(x))` over `m` fresh samples, outside the membership ledger.
pub fn estimate_error<C: Classifier + ?Sized>(
    source: &LabelSource,
    h: &C,
    m: usize,
    rng: &mut impl Rng,
) -> ErrorEstimate {
    assert!(m >= 1, "estimate_error needs at least one sample");
    let mut x = DVector::zeros(source.dim());
    let mut wrong = 0usize;
    for _ in 0..m {
        rng::fill_gaussian(&mut x, rng);
        if h.classify(&x) != source.label(&x, rng) {
            wrong += 1;
        }
    }
    let err = wrong as f64 / m as f64;
    ErrorEstimate {
        err,
        se: (err * (1.0 - err) / m as f64).sqrt(),
        samples: m,
    }
}
