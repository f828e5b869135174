//! Gamma-function machinery and binomial coefficients.
//!
//! The generalized binomial coefficient `C(M, s) = Γ(M+1) / (Γ(s+1) Γ(M-s+1))`
//! is evaluated in log space. Inside the positivity domain `-1 < s < M+1` it is
//! strictly positive; [`ext_binom`] continues it to all real `s` through the
//! reciprocal Gamma function, which is entire, so the derivative kernels of a
//! continuous mixture can be integrated past the edges of that domain.

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::math;

/// Natural logarithm of the Gamma function for `x > 0`.
///
/// Backed by the fdlibm `lgamma` port in `libm`, which keeps full relative
/// accuracy near the zeros of `ln Γ` at 1 and 2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "log_gamma argument",
            value: x,
        });
    }
    Ok(libm::lgamma_r(x).0)
}

/// `ln C(M, s)` on the positivity domain `-1 < s < M + 1`.
pub fn log_gen_binom(order: f64, s: f64) -> Result<f64> {
    if !(order > 0.0) || !order.is_finite() {
        return Err(Error::Domain {
            what: "binomial order",
            value: order,
        });
    }
    if !(s > -1.0 && s < order + 1.0) {
        return Err(Error::Domain {
            what: "binomial index",
            value: s,
        });
    }
    Ok(libm::lgamma_r(order + 1.0).0
        - libm::lgamma_r(s + 1.0).0
        - libm::lgamma_r(order - s + 1.0).0)
}

/// Generalized binomial coefficient `C(M, s)` for `M > 0`, `-1 < s < M + 1`.
pub fn gen_binom(order: f64, s: f64) -> Result<f64> {
    log_gen_binom(order, s).map(math::exp)
}

/// `1 / Γ(z)` split as `(ln |1/Γ(z)|, sign)`; the sign is zero at the poles of Γ.
fn ln_abs_recip_gamma(z: f64) -> (f64, f64) {
    if z <= 0.0 && math::floor(z) == z {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (lg, sign) = libm::lgamma_r(z);
    (-lg, if sign < 0 { -1.0 } else { 1.0 })
}

/// Binomial coefficient continued to every real `s` through `1/Γ`, returned as
/// `(ln |C(N, s)|, sign)`.
///
/// Requires `N > -1` so that `Γ(N + 1)` is finite and positive. The sign is zero
/// (and the log `-inf`) where `s + 1` or `N - s + 1` hits a pole of Γ.
pub fn ext_binom(top: f64, s: f64) -> (f64, f64) {
    debug_assert!(top > -1.0);
    let (la, sa) = ln_abs_recip_gamma(s + 1.0);
    let (lb, sb) = ln_abs_recip_gamma(top - s + 1.0);
    let sign = sa * sb;
    if sign == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    (libm::lgamma_r(top + 1.0).0 + la + lb, sign)
}

/// Signed value of [`ext_binom`].
pub fn ext_binom_value(top: f64, s: f64) -> f64 {
    let (l, sign) = ext_binom(top, s);
    if sign == 0.0 {
        0.0
    } else {
        sign * math::exp(l)
    }
}

/// Exact `C(M, i)`, zero when `i < 0` or `i > M`.
pub fn int_binom_exact(order: u64, i: i64) -> BigUint {
    if i < 0 || i as u64 > order {
        return BigUint::ZERO;
    }
    let i = i as u64;
    let k = i.min(order - i);
    let mut acc = BigUint::from(1u32);
    for j in 1..=k {
        acc *= order - k + j;
        acc /= j;
    }
    acc
}

/// Exact `C(top, i)` for any integer `top`. A negative top uses
/// `C(top, i) = (-1)^i C(i - top - 1, i)` for `i >= 0`, the limit of the
/// Gamma-function form; it keeps Vandermonde's identity valid for `M = 1`.
pub fn int_binom_signed_top(top: i64, i: i64) -> BigInt {
    if top >= 0 {
        return BigInt::from(int_binom_exact(top as u64, i));
    }
    if i < 0 {
        return BigInt::ZERO;
    }
    let magnitude = BigInt::from(int_binom_exact((i - top - 1) as u64, i));
    if i % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn log_gamma_known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(rel(log_gamma(5.0).unwrap(), 24f64.ln()) < 1e-15);
        assert!(rel(log_gamma(0.5).unwrap(), 0.5 * core::f64::consts::PI.ln()) < 1e-15);
    }

    #[test]
    fn log_gamma_matches_high_precision_table() {
        // Reference values at the exact binary value of each argument.
        let table = [
            (0.001, 6.9071788853838536617),
            (0.1, 2.252712651734205902),
            (0.5, 0.57236494292470008707),
            (0.9999, 0.000057729791561193862808),
            (1.0001, -0.000057713342220471268005),
            (1.5, -0.12078223763524522235),
            (1.99, -0.0041955290887916687019),
            (2.0001, 0.000042281658112919946317),
            (3.7, 1.4280723266653881292),
            (10.25, 13.368023671476046295),
            (123.5, 469.81727549193060494),
            (1000.0, 5905.2204232091812118),
            (9999.5, 82095.112363757639228),
        ];
        for (x, want) in table {
            let got = log_gamma(x).unwrap();
            assert!(rel(got, want) <= 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn gen_binom_examples() {
        assert!(rel(gen_binom(4.0, 2.0).unwrap(), 6.0) < 1e-14);
        assert!(rel(gen_binom(2.5, 0.5).unwrap(), 1.875) < 1e-14);
        assert!(rel(gen_binom(7.3, 2.2).unwrap(), 26.879323174455168998) < 1e-13);
        assert!(rel(gen_binom(30.5, -0.75).unwrap(), 0.020805353208748124982) < 1e-12);
        assert!(rel(gen_binom(12.0, 12.9).unwrap(), 0.010485716112997218685) < 1e-12);
    }

    #[test]
    fn gen_binom_domain() {
        assert!(gen_binom(3.0, -1.0).is_err());
        assert!(gen_binom(3.0, 4.0).is_err());
        assert!(gen_binom(0.0, 0.0).is_err());
        assert!(gen_binom(3.0, 3.99).is_ok());
    }

    #[test]
    fn ext_binom_agrees_inside_and_vanishes_at_poles() {
        for &(m, s) in &[(3.0, 1.5), (2.2, -0.5), (5.0, 5.5)] {
            let (l, sign) = ext_binom(m, s);
            assert_eq!(sign, 1.0);
            assert!(rel(l.exp(), gen_binom(m, s).unwrap()) < 1e-14);
        }
        assert_eq!(ext_binom_value(3.0, -1.0), 0.0);
        assert_eq!(ext_binom_value(3.0, 4.0), 0.0);
        assert_eq!(ext_binom_value(3.0, -2.0), 0.0);
        // Γ(s+1) < 0 for s in (-2, -1).
        assert!(ext_binom_value(3.0, -1.5) < 0.0);
        assert!(ext_binom_value(3.0, 4.5) < 0.0);
    }

    #[test]
    fn negative_top_is_the_gamma_limit() {
        for j in 0..6i64 {
            let limit = ext_binom_value(-1.0 + 1e-9, j as f64);
            let exact = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((limit - exact).abs() < 1e-6, "j={j}: {limit}");
            assert_eq!(int_binom_signed_top(-1, j), BigInt::from(exact as i64));
        }
    }

    fn pascal(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
        for r in 1..=n {
            let prev = &rows[r - 1];
            let mut row = vec![BigUint::from(1u32); r + 1];
            for i in 1..r {
                row[i] = &prev[i - 1] + &prev[i];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn int_binom_matches_pascal_triangle() {
        let rows = pascal(60);
        for (m, row) in rows.iter().enumerate() {
            for (i, want) in row.iter().enumerate() {
                assert_eq!(&int_binom_exact(m as u64, i as i64), want);
            }
        }
        assert_eq!(int_binom_exact(3, 1), BigUint::from(3u32));
        assert_eq!(int_binom_exact(3, -1), BigUint::ZERO);
        assert_eq!(int_binom_exact(3, 4), BigUint::ZERO);
        assert_eq!(int_binom_signed_top(-1, -1), BigInt::ZERO);
        assert_eq!(int_binom_signed_top(-1, 0), BigInt::from(1));
        assert_eq!(int_binom_signed_top(-1, 3), BigInt::from(-1));
        assert_eq!(int_binom_signed_top(-2, 3), BigInt::from(-4));
    }

    #[test]
    fn gen_binom_matches_exact_integers() {
        use num_traits::ToPrimitive;
        for m in 1..=60u64 {
            for i in 0..=m {
                let exact = int_binom_exact(m, i as i64).to_f64().unwrap();
                let got = gen_binom(m as f64, i as f64).unwrap();
                assert!(rel(got, exact) <= 1e-12, "C({m},{i}) = {got} vs {exact}");
            }
        }
    }

    proptest! {
        #[test]
        fn symmetry(m in 0.05f64..50.0, t in 0.0f64..1.0) {
            let s = -1.0 + 1e-6 + t * (m + 2.0 - 2e-6);
            let a = gen_binom(m, s).unwrap();
            let b = gen_binom(m, m - s).unwrap();
            prop_assert!(rel(a, b) <= 1e-12);
        }

        #[test]
        fn ratio_identities(m in 1.01f64..50.0, t in 0.0f64..1.0) {
            // Both identities need s inside the domains of C(M-1, ·) and C(M, ·).
            let s = 1e-6 + t * (m - 2e-6);
            let full = gen_binom(m, s).unwrap();
            let down = gen_binom(m - 1.0, s).unwrap();
            prop_assert!(rel(down, (m - s) / m * full) <= 1e-12);
            let diag = gen_binom(m - 1.0, s - 1.0).unwrap();
            prop_assert!(rel(diag, s / m * full) <= 1e-12);
        }

        #[test]
        fn pascal_rule(m in 1.01f64..50.0, t in 0.0f64..1.0) {
            // All three terms defined with margin 1e-6: s in (1e-6 - 1 + 1, M - 1e-6).
            let s = 1e-6 + t * (m - 2e-6);
            let lhs = gen_binom(m, s).unwrap();
            let rhs = gen_binom(m - 1.0, s).unwrap() + gen_binom(m - 1.0, s - 1.0).unwrap();
            prop_assert!(rel(lhs, rhs) <= 1e-12);
        }

        #[test]
        fn positive_on_domain(m in 0.01f64..200.0, t in 0.0f64..1.0) {
            let s = -1.0 + (m + 2.0) * (1e-9 + t * (1.0 - 2e-9));
            let v = gen_binom(m, s).unwrap();
            prop_assert!(v.is_finite() && v > 0.0);
        }
    }
}
