use alloc::vec::Vec;

use super::{check_unit_interval, Density, EvalResult};
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};

/// `Σ_i coeffs[i] C(n, i) (1-x)^i x^(n-i)` with `n = coeffs.len() - 1`.
///
/// This is the Bernstein basis read in the variable `1 - x`, so the recursion
/// interpolates each adjacent pair as `x·b_i + (1-x)·b_{i+1}`. At the endpoints
/// the result is exactly `coeffs[n]` (x = 0) or `coeffs[0]` (x = 1).
pub fn de_casteljau(coeffs: &[f64], x: f64) -> f64 {
    match coeffs.len() {
        0 => return 0.0,
        1 => return coeffs[0],
        _ => {}
    }
    let y = 1.0 - x;
    let mut b: Vec<f64> = coeffs.to_vec();
    for level in (1..b.len()).rev() {
        for i in 0..level {
            b[i] = x * b[i] + y * b[i + 1];
        }
    }
    b[0]
}

/// Finite mixture `g(x) = Σ_{i=0}^{M} α_i C(M, i) (1-x)^i x^(M-i)`.
///
/// Component `i` is `1/(M+1)` times a `Beta(M-i+1, i+1)` density.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMixture {
    weights: Vec<f64>,
}

impl DiscreteMixture {
    /// Builds a mixture of order `weights.len() - 1`. Needs at least two
    /// weights, all finite and nonnegative.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidMixture(
                "need at least two weights (order M >= 1)",
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMixture(
                "weights must be finite and nonnegative",
            ));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order_usize(&self) -> usize {
        self.weights.len() - 1
    }

    /// Same mixture with the weight vector reversed; maps `g(x)` to `g(1-x)`.
    pub fn reversed(&self) -> Self {
        let mut w = self.weights.clone();
        w.reverse();
        Self { weights: w }
    }

    /// Weights multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.weights.iter().map(|w| w * c).collect())
    }

    /// Whether the weight sequence is log-concave: no interior zeros and
    /// `α_i² ≥ α_{i-1} α_{i+1}` up to a relative slack of `rel_tol`.
    pub fn is_log_concave_with(&self, rel_tol: f64) -> bool {
        is_log_concave_sequence(&self.weights, rel_tol)
    }

    pub fn is_log_concave(&self) -> bool {
        self.is_log_concave_with(1e-12)
    }

    /// Density by direct summation of the Bernstein terms; slower and less
    /// stable than [`de_casteljau`], kept for cross-checking.
    pub fn density_direct(&self, x: f64) -> f64 {
        let m = self.order_usize();
        let mut binom = 1.0;
        let mut acc = 0.0;
        for (i, a) in self.weights.iter().enumerate() {
            if i > 0 {
                binom = binom * (m - i + 1) as f64 / i as f64;
            }
            acc += a
                * binom
                * crate::math::powi(1.0 - x, i as i32)
                * crate::math::powi(x, (m - i) as i32);
        }
        acc
    }

    /// `∫_0^x g` with an explicit quadrature configuration.
    pub fn cdf_with(&self, x: f64, quad: &QuadratureConfig) -> Result<f64> {
        check_unit_interval(x, false)?;
        Ok(quadrature::integrate(0.0, x, quad, |t| {
            de_casteljau(&self.weights, t)
        }))
    }

    fn first_differences(&self) -> Vec<f64> {
        self.weights.windows(2).map(|w| w[0] - w[1]).collect()
    }

    fn second_differences(&self) -> Vec<f64> {
        self.weights
            .windows(3)
            .map(|w| w[0] - 2.0 * w[1] + w[2])
            .collect()
    }
}

pub(crate) fn is_log_concave_sequence(a: &[f64], rel_tol: f64) -> bool {
    let first = a.iter().position(|w| *w > 0.0);
    let last = a.iter().rposition(|w| *w > 0.0);
    let (first, last) = match (first, last) {
        (Some(f), Some(l)) => (f, l),
        _ => return true,
    };
    if a[first..=last].iter().any(|w| *w <= 0.0) {
        return false;
    }
    a[first..=last]
        .windows(3)
        .all(|w| w[1] * w[1] >= w[0] * w[2] * (1.0 - rel_tol))
}

impl Density for DiscreteMixture {
    fn order(&self) -> f64 {
        self.order_usize() as f64
    }

    fn is_identically_zero(&self) -> bool {
        self.weights.iter().all(|w| *w == 0.0)
    }

    fn density(&self, x: f64) -> Result<f64> {
        check_unit_interval(x, false)?;
        Ok(de_casteljau(&self.weights, x))
    }

    /// `g' = M Σ (α_i - α_{i+1}) C(M-1, i) (1-x)^i x^(M-1-i)` and
    /// `g'' = M(M-1) Σ (α_i - 2α_{i+1} + α_{i+2}) C(M-2, i) (1-x)^i x^(M-2-i)`.
    fn derivatives(&self, x: f64) -> Result<EvalResult> {
        check_unit_interval(x, true)?;
        let m = self.order();
        let value = de_casteljau(&self.weights, x);
        let d1 = m * de_casteljau(&self.first_differences(), x);
        let d2 = m * (m - 1.0) * de_casteljau(&self.second_differences(), x);
        Ok(EvalResult::from_raw(value, d1, d2))
    }

    /// `Σ α_i / (M + 1)`: each Bernstein term integrates to `1/(M+1)`.
    fn normalization(&self) -> Result<f64> {
        if self.is_identically_zero() {
            return Err(Error::Degenerate);
        }
        Ok(self.weights.iter().sum::<f64>() / (self.order() + 1.0))
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        self.cdf_with(x, &QuadratureConfig::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn mix(w: &[f64]) -> DiscreteMixture {
        DiscreteMixture::new(w.to_vec()).unwrap()
    }

    #[test]
    fn uniform_weights_give_one() {
        let g = mix(&[1.0, 1.0, 1.0]);
        assert!((g.density(0.37).unwrap() - 1.0).abs() < 1e-15);
        let e = g.derivatives(0.37).unwrap();
        assert_eq!((e.d1, e.d2), (0.0, 0.0));
    }

    #[test]
    fn geometric_weights_closed_form() {
        // α_i = 2^i gives (2 - x)^2.
        let g = mix(&[1.0, 2.0, 4.0]);
        assert!((g.density(0.5).unwrap() - 2.25).abs() < 1e-15);
        for &x in &[0.1, 0.5, 0.9] {
            let e = g.derivatives(x).unwrap();
            assert!((e.value - (2.0 - x) * (2.0 - x)).abs() < 1e-14);
            assert!((e.d1 + 2.0 * (2.0 - x)).abs() < 1e-14);
            assert!((e.d2 - 2.0).abs() < 1e-14);
            assert!((e.value * e.d2 - 0.5 * e.d1 * e.d1).abs() < 1e-13);
        }
    }

    #[test]
    fn single_bernstein_term() {
        let g = mix(&[0.0, 1.0, 0.0]);
        assert!((g.density(0.5).unwrap() - 0.5).abs() < 1e-16);
    }

    #[test]
    fn endpoints_are_exact() {
        let g = mix(&[0.3, 1.7, 2.9, 0.11]);
        assert_eq!(g.density(0.0).unwrap(), 0.11);
        assert_eq!(g.density(1.0).unwrap(), 0.3);
        assert!(g.derivatives(0.0).is_err());
        assert!(g.density(1.5).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let g = mix(&[1.0, 5.0, 2.0, 1.0]);
        let x = 0.3;
        let h = 1e-5;
        let f = |t: f64| g.density(t).unwrap();
        let fd1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let fd2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let e = g.derivatives(x).unwrap();
        assert!((e.d1 - fd1).abs() <= 1e-6 * fd1.abs());
        assert!((e.d2 - fd2).abs() <= 1e-4 * fd2.abs());
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(mix(&[1.0, 1.0, 1.0]).normalization().unwrap(), 1.0);
        assert_eq!(mix(&[3.0, 0.0, 0.0]).normalization().unwrap(), 1.0);
        let g = mix(&[1.0, 2.0, 3.0, 2.0, 1.0]);
        assert!((g.normalization().unwrap() - 9.0 / 5.0).abs() < 1e-15);
        assert!((g.cdf(1.0).unwrap() - 9.0 / 5.0).abs() < 1e-13);
        assert_eq!(mix(&[0.0, 0.0]).normalization(), Err(Error::Degenerate));
    }

    #[test]
    fn cdf_examples() {
        let g = mix(&[1.0, 1.0, 1.0]);
        assert_eq!(g.cdf(0.0).unwrap(), 0.0);
        assert!((g.cdf(0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((g.cdf(1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(DiscreteMixture::new(vec![1.0]).is_err());
        assert!(DiscreteMixture::new(vec![1.0, -1.0]).is_err());
        assert!(DiscreteMixture::new(vec![1.0, f64::NAN]).is_err());
        assert!(DiscreteMixture::new(vec![0.0, 0.0]).is_ok());
    }

    #[test]
    fn log_concavity_of_sequences() {
        assert!(mix(&[1.0, 2.0, 4.0]).is_log_concave());
        assert!(mix(&[0.0, 1.0, 1.0, 0.0]).is_log_concave());
        assert!(!mix(&[1.0, 0.01, 1.0]).is_log_concave());
        assert!(!mix(&[1.0, 0.0, 1.0]).is_log_concave());
        assert!(mix(&[0.0, 0.0, 0.0]).is_log_concave());
    }

    proptest! {
        #[test]
        fn casteljau_matches_direct_sum(w in proptest::collection::vec(0.0f64..10.0, 2..30), x in 0.0f64..=1.0) {
            let g = mix(&w);
            let a = g.density(x).unwrap();
            let b = g.density_direct(x);
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn reversal_mirrors(w in proptest::collection::vec(0.0f64..10.0, 2..40), x in 0.0f64..=1.0) {
            let g = mix(&w);
            let a = g.reversed().density(x).unwrap();
            let b = g.density(1.0 - x).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn nonnegative(w in proptest::collection::vec(0.0f64..10.0, 2..40), x in 0.0f64..=1.0) {
            prop_assert!(mix(&w).density(x).unwrap() >= 0.0);
        }
    }

    #[test]
    fn degenerate_has_no_log() {
        let e = mix(&[0.0, 0.0, 0.0]).derivatives(0.5).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.log_value, f64::NEG_INFINITY);
    }
}
