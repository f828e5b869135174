//! Evaluation, differentiation and log-concavity certification for discrete
//! and continuous mixtures of Beta distributions.
//!
//! A discrete mixture of order `M` with weights `α_0..α_M` is the Bernstein-form
//! polynomial
//!
//! ```text
//! g(x) = Σ_i α_i C(M, i) (1 - x)^i x^(M - i)
//! ```
//!
//! and a continuous mixture replaces the sum by an integral over `s ∈ [0, M]`
//! against a mixing function `α(s)`, using the generalized binomial coefficient
//! `C(M, s) = Γ(M + 1) / (Γ(s + 1) Γ(M - s + 1))`. Each term is `1 / (M + 1)`
//! times a `Beta(M - s + 1, s + 1)` density, so both objects are (unnormalized)
//! Beta mixtures.
//!
//! Log-concave weights produce log-concave mixtures, and in fact the stronger
//! curvature bound `((M - 1) / M) f'² ≥ f f''` holds; [`certify`] checks that
//! bound on a grid. The [`lemma`] module carries exact and quadrature-based
//! checks of the combinatorial inequalities that drive it.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
// `!(a > b)` is deliberate throughout: NaN must fail every domain check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod certify;
pub mod lemma;
pub mod mixture;
pub mod quadrature;
pub mod random;
pub mod special;

pub use certify::{
    certify, curvature_margin, find_kernel_failure, kernel_log_curvature, sharpness_check,
    CertifyOptions, ConcavityCertificate, Criterion, MidpointWitness, Verdict,
};
pub use error::{Error, Result};
pub use mixture::{
    ContinuousEvaluator, ContinuousMixture, Density, DiscreteMixture, EvalResult, Sampler,
};
pub use quadrature::{QuadratureConfig, QuadratureRule};
