//! Mixture data model and evaluation.
//!
//! [`DiscreteMixture`] is the finite sum over integer indices, evaluated by de
//! Casteljau recursion. [`ContinuousMixture`] integrates an exp-piecewise-linear
//! mixing function against the generalized binomial kernel; it is evaluated
//! through a [`ContinuousEvaluator`] that precomputes the quadrature nodes.

mod continuous;
mod discrete;
mod sampling;

pub use continuous::{ContinuousEvaluator, ContinuousMixture};
pub(crate) use discrete::is_log_concave_sequence;
pub use discrete::{de_casteljau, DiscreteMixture};
pub use sampling::{sample, Sampler};

use crate::error::Result;

/// Density value and derivatives at a point.
///
/// The `log_*` fields are derivatives of `ln f`: `log_d1 = f'/f` and
/// `log_d2 = (f f'' - f'^2) / f^2`. `curvature_ratio` is `f''/f`. When `f(x) = 0`
/// the log fields are `-inf`/NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub log_value: f64,
    pub log_d1: f64,
    pub log_d2: f64,
    pub curvature_ratio: f64,
}

impl EvalResult {
    pub(crate) fn from_raw(value: f64, d1: f64, d2: f64) -> Self {
        if value > 0.0 {
            let r1 = d1 / value;
            let r2 = d2 / value;
            Self::from_ratios(value, crate::math::ln(value), r1, r2)
        } else {
            Self {
                value,
                d1,
                d2,
                log_value: f64::NEG_INFINITY,
                log_d1: f64::NAN,
                log_d2: f64::NAN,
                curvature_ratio: f64::NAN,
            }
        }
    }

    /// Build from `ln f`, `f'/f` and `f''/f`; the raw derivatives may overflow
    /// while the ratios stay finite.
    pub(crate) fn from_ratios(value: f64, log_value: f64, r1: f64, r2: f64) -> Self {
        Self {
            value,
            d1: r1 * value,
            d2: r2 * value,
            log_value,
            log_d1: r1,
            log_d2: r2 - r1 * r1,
            curvature_ratio: r2,
        }
    }
}

/// Common surface of the two mixture kinds.
pub trait Density {
    /// Mixture order `M`.
    fn order(&self) -> f64;

    /// True when every weight is zero, so the density vanishes identically.
    fn is_identically_zero(&self) -> bool;

    /// Density at `x ∈ [0, 1]` (continuous mixtures need `0 < x < 1`).
    fn density(&self, x: f64) -> Result<f64>;

    /// Value and first two derivatives at `x ∈ (0, 1)`.
    fn derivatives(&self, x: f64) -> Result<EvalResult>;

    /// `∫_0^1 f`, i.e. the total mass before normalizing to a probability density.
    fn normalization(&self) -> Result<f64>;

    /// `∫_0^x f`.
    fn cdf(&self, x: f64) -> Result<f64>;
}

impl<T: Density + ?Sized> Density for &T {
    fn order(&self) -> f64 {
        (**self).order()
    }
    fn is_identically_zero(&self) -> bool {
        (**self).is_identically_zero()
    }
    fn density(&self, x: f64) -> Result<f64> {
        (**self).density(x)
    }
    fn derivatives(&self, x: f64) -> Result<EvalResult> {
        (**self).derivatives(x)
    }
    fn normalization(&self) -> Result<f64> {
        (**self).normalization()
    }
    fn cdf(&self, x: f64) -> Result<f64> {
        (**self).cdf(x)
    }
}

pub(crate) fn check_unit_interval(x: f64, open: bool) -> Result<()> {
    let ok = if open {
        x > 0.0 && x < 1.0
    } else {
        (0.0..=1.0).contains(&x)
    };
    if ok {
        Ok(())
    } else {
        Err(crate::Error::Domain {
            what: "evaluation point",
            value: x,
        })
    }
}
