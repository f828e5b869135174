use alloc::vec::Vec;

use super::{check_unit_interval, Density, EvalResult};
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::{self, QuadratureConfig, ReferenceRule};
use crate::special::ext_binom;

/// Continuous mixture `f(x) = ∫_0^M α(s) C(M, s) (1-x)^s x^(M-s) ds` with
/// `α = exp(ℓ)` and `ℓ` piecewise linear on a knot grid `0 = s_0 < … < s_K = M`.
///
/// Knot values may be `-inf`; a segment touching a `-inf` knot carries no mass.
/// Outside `[0, M]` the mixing function is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousMixture {
    order: f64,
    knots: Vec<f64>,
    log_alpha: Vec<f64>,
}

impl ContinuousMixture {
    pub fn new(order: f64, knots: Vec<f64>, log_alpha: Vec<f64>) -> Result<Self> {
        if !(order > 1.0) || !order.is_finite() {
            return Err(Error::InvalidMixture("order M must be a finite real > 1"));
        }
        if knots.len() < 2 || knots.len() != log_alpha.len() {
            return Err(Error::InvalidMixture(
                "need at least two knots and one log_alpha value per knot",
            ));
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != order {
            return Err(Error::InvalidMixture("knots must start at 0 and end at M"));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMixture("knots must be strictly increasing"));
        }
        if log_alpha.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
            return Err(Error::InvalidMixture(
                "log_alpha values must be finite or -inf",
            ));
        }
        Ok(Self {
            order,
            knots,
            log_alpha,
        })
    }

    /// Constant `α ≡ exp(log_alpha)` on `[0, M]`.
    pub fn constant(order: f64, log_alpha: f64) -> Result<Self> {
        Self::new(
            order,
            alloc::vec![0.0, order],
            alloc::vec![log_alpha, log_alpha],
        )
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn log_alpha(&self) -> &[f64] {
        &self.log_alpha
    }

    /// `ℓ(s) = ln α(s)`, `-inf` off the support.
    pub fn log_alpha_at(&self, s: f64) -> f64 {
        if !(s >= 0.0 && s <= self.order) {
            return f64::NEG_INFINITY;
        }
        let j = self.knots.partition_point(|k| *k <= s);
        if j == 0 {
            return self.log_alpha[0];
        }
        if j >= self.knots.len() {
            return self.log_alpha[self.knots.len() - 1];
        }
        if s == self.knots[j - 1] {
            return self.log_alpha[j - 1];
        }
        self.segment_value(j - 1, s)
    }

    fn segment_value(&self, seg: usize, s: f64) -> f64 {
        let (a, b) = (self.knots[seg], self.knots[seg + 1]);
        let (la, lb) = (self.log_alpha[seg], self.log_alpha[seg + 1]);
        if la == f64::NEG_INFINITY || lb == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let t = (s - a) / (b - a);
        la + t * (lb - la)
    }

    fn segment_has_mass(&self, seg: usize) -> bool {
        self.log_alpha[seg].is_finite() && self.log_alpha[seg + 1].is_finite()
    }

    /// Index of the knot segment containing `s`, given that `s` lies strictly
    /// inside one.
    fn segment_of(&self, s: f64) -> Option<usize> {
        if !(s > 0.0 && s < self.order) {
            return None;
        }
        Some(self.knots.partition_point(|k| *k <= s) - 1)
    }

    pub fn is_identically_zero(&self) -> bool {
        (0..self.knots.len() - 1).all(|j| !self.segment_has_mass(j))
    }

    /// Whether `α` is log-concave: the finite knot values form one contiguous
    /// run and the segment slopes are nonincreasing (up to `tol` relative).
    pub fn is_log_concave_with(&self, tol: f64) -> bool {
        let first = self.log_alpha.iter().position(|l| l.is_finite());
        let last = self.log_alpha.iter().rposition(|l| l.is_finite());
        let (first, last) = match (first, last) {
            (Some(f), Some(l)) => (f, l),
            _ => return true,
        };
        if self.log_alpha[first..=last].iter().any(|l| !l.is_finite()) {
            return false;
        }
        let slopes: Vec<f64> = (first..last)
            .map(|j| {
                (self.log_alpha[j + 1] - self.log_alpha[j]) / (self.knots[j + 1] - self.knots[j])
            })
            .collect();
        slopes
            .windows(2)
            .all(|w| w[1] <= w[0] + tol * (1.0 + w[0].abs().max(w[1].abs())))
    }

    pub fn is_log_concave(&self) -> bool {
        self.is_log_concave_with(1e-12)
    }

    /// `∫_0^M α(s) ds`, exact for exp-linear segments.
    pub fn mass(&self) -> f64 {
        let mut total = 0.0;
        for j in 0..self.knots.len() - 1 {
            if !self.segment_has_mass(j) {
                continue;
            }
            let width = self.knots[j + 1] - self.knots[j];
            let (la, lb) = (self.log_alpha[j], self.log_alpha[j + 1]);
            let d = lb - la;
            // width * (e^lb - e^la) / d, written to stay accurate as d -> 0.
            let factor = if d.abs() < 1e-8 {
                1.0 + d / 2.0
            } else {
                math::expm1(d) / d
            };
            total += width * math::exp(la) * factor;
        }
        total
    }
}

/// Sign and x-independent part of one integrand term at a node.
#[derive(Debug, Clone, Copy)]
struct Node {
    s: f64,
    log_mag: f64,
    sign: f64,
}

/// Nodes of one kernel integral `∫ [Σ_j c_j α(s+j)] C(N, s) (1-x)^s x^(N-s) ds`.
#[derive(Debug, Clone)]
struct Kernel {
    top: f64,
    nodes: Vec<Node>,
}

/// Scaled value `exp(log_scale) * mantissa`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    log_scale: f64,
    mantissa: f64,
}

impl Scaled {
    fn rescaled(&self, log_scale: f64) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * math::exp(self.log_scale - log_scale)
        }
    }
}

impl Kernel {
    fn build(
        mix: &ContinuousMixture,
        derivative: usize,
        cfg: &QuadratureConfig,
        rule: &ReferenceRule,
    ) -> Self {
        const PATTERNS: [&[(usize, f64)]; 3] = [
            &[(0, 1.0)],
            &[(0, 1.0), (1, -1.0)],
            &[(0, 1.0), (1, -2.0), (2, 1.0)],
        ];
        let pattern = PATTERNS[derivative];
        let m = mix.order;
        let top = m - derivative as f64;
        let lo = -(derivative as f64);

        // Split wherever a shifted argument s + j crosses a knot.
        let mut breaks: Vec<f64> = Vec::with_capacity(mix.knots.len() * (derivative + 1) + 2);
        breaks.push(lo);
        breaks.push(m);
        for &(shift, _) in pattern {
            for &k in &mix.knots {
                let b = k - shift as f64;
                if b > lo && b < m {
                    breaks.push(b);
                }
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();

        let mut nodes = Vec::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            for &(shift, coef) in pattern {
                let seg = match mix.segment_of(mid + shift as f64) {
                    Some(seg) if mix.segment_has_mass(seg) => seg,
                    _ => continue,
                };
                let log_coef = math::ln(coef.abs());
                quadrature::for_each_node(a, b, cfg, rule, |s, weight| {
                    let (log_binom, sign) = ext_binom(top, s);
                    if sign == 0.0 {
                        return;
                    }
                    let la = mix.segment_value(seg, s + shift as f64);
                    nodes.push(Node {
                        s,
                        log_mag: math::ln(weight) + log_coef + la + log_binom,
                        sign: sign * coef.signum(),
                    });
                });
            }
        }
        Self { top, nodes }
    }

    fn eval(&self, ln_x: f64, ln_1mx: f64, buf: &mut Vec<f64>) -> Scaled {
        buf.clear();
        let mut peak = f64::NEG_INFINITY;
        for n in &self.nodes {
            let e = n.log_mag + n.s * ln_1mx + (self.top - n.s) * ln_x;
            peak = peak.max(e);
            buf.push(e);
        }
        if peak == f64::NEG_INFINITY {
            return Scaled {
                log_scale: f64::NEG_INFINITY,
                mantissa: 0.0,
            };
        }
        let mantissa = self
            .nodes
            .iter()
            .zip(buf.iter())
            .map(|(n, e)| n.sign * math::exp(e - peak))
            .sum();
        Scaled {
            log_scale: peak,
            mantissa,
        }
    }
}

#[derive(Debug, Clone)]
struct Plan {
    kernels: [Kernel; 3],
}

impl Plan {
    fn build(mix: &ContinuousMixture, cfg: &QuadratureConfig) -> Self {
        let rule = cfg.reference_rule();
        Self {
            kernels: [
                Kernel::build(mix, 0, cfg, &rule),
                Kernel::build(mix, 1, cfg, &rule),
                Kernel::build(mix, 2, cfg, &rule),
            ],
        }
    }
}

/// A [`ContinuousMixture`] paired with precomputed quadrature nodes for `f`,
/// `f'` and `f''`.
///
/// `f'` and `f''` come from the difference kernels
///
/// ```text
/// f'(x)  = M      ∫_{-1}^{M} [α(s) - α(s+1)]          C(M-1, s) (1-x)^s x^(M-1-s) ds
/// f''(x) = M(M-1) ∫_{-2}^{M} [α(s) - 2α(s+1) + α(s+2)] C(M-2, s) (1-x)^s x^(M-2-s) ds
/// ```
///
/// with the binomials continued through `1/Γ` (see [`ext_binom`]); on parts of
/// the `f''` range they are negative. Every integral is also evaluated with
/// the next coarser configuration and the two must agree to `abs_tol`,
/// measured in units of the peak integrand magnitude.
#[derive(Debug, Clone)]
pub struct ContinuousEvaluator {
    mixture: ContinuousMixture,
    quad: QuadratureConfig,
    fine: Plan,
    coarse: Plan,
}

impl ContinuousEvaluator {
    pub fn new(mixture: ContinuousMixture, quad: QuadratureConfig) -> Self {
        let fine = Plan::build(&mixture, &quad);
        let coarse = Plan::build(&mixture, &quad.coarsened());
        Self {
            mixture,
            quad,
            fine,
            coarse,
        }
    }

    pub fn mixture(&self) -> &ContinuousMixture {
        &self.mixture
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    fn integral(&self, which: usize, ln_x: f64, ln_1mx: f64, buf: &mut Vec<f64>) -> Result<Scaled> {
        let fine = self.fine.kernels[which].eval(ln_x, ln_1mx, buf);
        let coarse = self.coarse.kernels[which].eval(ln_x, ln_1mx, buf);
        let scale = fine.log_scale.max(coarse.log_scale);
        if scale == f64::NEG_INFINITY {
            return Ok(fine);
        }
        let difference = (fine.rescaled(scale) - coarse.rescaled(scale)).abs();
        if !(difference <= self.quad.abs_tol) {
            return Err(Error::QuadratureFailure {
                difference,
                tolerance: self.quad.abs_tol,
            });
        }
        Ok(fine)
    }

    fn logs(x: f64) -> (f64, f64) {
        (math::ln(x), math::ln1p(-x))
    }

    /// `ln f(x)` for `x ∈ (0, 1)`; `-inf` for the zero mixture.
    pub fn log_density(&self, x: f64) -> Result<f64> {
        check_unit_interval(x, true)?;
        let (lx, l1x) = Self::logs(x);
        let mut buf = Vec::new();
        let f = self.integral(0, lx, l1x, &mut buf)?;
        if f.mantissa <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(f.log_scale + math::ln(f.mantissa))
    }
}

impl Density for ContinuousEvaluator {
    fn order(&self) -> f64 {
        self.mixture.order
    }

    fn is_identically_zero(&self) -> bool {
        self.mixture.is_identically_zero()
    }

    /// Endpoint values are the limits, which vanish for every bounded `α`.
    fn density(&self, x: f64) -> Result<f64> {
        check_unit_interval(x, false)?;
        if x == 0.0 || x == 1.0 {
            return Ok(0.0);
        }
        Ok(math::exp(self.log_density(x)?))
    }

    fn derivatives(&self, x: f64) -> Result<EvalResult> {
        check_unit_interval(x, true)?;
        let (lx, l1x) = Self::logs(x);
        let mut buf = Vec::new();
        let f = self.integral(0, lx, l1x, &mut buf)?;
        let f1 = self.integral(1, lx, l1x, &mut buf)?;
        let f2 = self.integral(2, lx, l1x, &mut buf)?;
        let m = self.mixture.order;
        if f.mantissa <= 0.0 {
            let d1 = m * f1.rescaled(0.0);
            let d2 = m * (m - 1.0) * f2.rescaled(0.0);
            return Ok(EvalResult::from_raw(0.0, d1, d2));
        }
        let log_value = f.log_scale + math::ln(f.mantissa);
        let r1 = m * f1.rescaled(f.log_scale) / f.mantissa;
        let r2 = m * (m - 1.0) * f2.rescaled(f.log_scale) / f.mantissa;
        Ok(EvalResult::from_ratios(
            math::exp(log_value),
            log_value,
            r1,
            r2,
        ))
    }

    /// `∫_0^M α(s) ds / (M + 1)`.
    fn normalization(&self) -> Result<f64> {
        if self.is_identically_zero() {
            return Err(Error::Degenerate);
        }
        Ok(self.mixture.mass() / (self.mixture.order + 1.0))
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        check_unit_interval(x, false)?;
        let rule = self.quad.reference_rule();
        let mut acc = 0.0;
        let mut err = None;
        quadrature::for_each_node(0.0, x, &self.quad, &rule, |t, w| {
            if err.is_some() {
                return;
            }
            match self.density(t) {
                Ok(v) => acc += w * v,
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(acc),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gen_binom;
    use alloc::vec;

    fn eval(mix: ContinuousMixture) -> ContinuousEvaluator {
        ContinuousEvaluator::new(mix, QuadratureConfig::default())
    }

    /// Midpoint Riemann sum of the defining integral.
    fn riemann_density(mix: &ContinuousMixture, x: f64, points: usize) -> f64 {
        let m = mix.order;
        let h = m / points as f64;
        (0..points)
            .map(|i| {
                let s = (i as f64 + 0.5) * h;
                mix.log_alpha_at(s).exp()
                    * gen_binom(m, s).unwrap()
                    * (1.0 - x).powf(s)
                    * x.powf(m - s)
            })
            .sum::<f64>()
            * h
    }

    /// Direct differentiation of the kernel under the integral sign, valid for
    /// any M > 0 and independent of the difference-kernel route.
    fn direct_derivatives(mix: &ContinuousMixture, x: f64) -> (f64, f64, f64) {
        let m = mix.order;
        let cfg = QuadratureConfig {
            panels_per_unit: 64,
            ..QuadratureConfig::default()
        };
        let mut out = (0.0, 0.0, 0.0);
        for w in mix.knots.windows(2) {
            quadrature::for_each_node(w[0], w[1], &cfg, &cfg.reference_rule(), |s, wt| {
                let k = mix.log_alpha_at(s).exp()
                    * gen_binom(m, s).unwrap()
                    * (1.0 - x).powf(s)
                    * x.powf(m - s);
                let psi1 = (m - s) / x - s / (1.0 - x);
                let psi2 = -s / (1.0 - x).powi(2) - (m - s) / (x * x);
                out.0 += wt * k;
                out.1 += wt * k * psi1;
                out.2 += wt * k * (psi1 * psi1 + psi2);
            });
        }
        out
    }

    #[test]
    fn constructor_validation() {
        assert!(ContinuousMixture::new(1.0, vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(ContinuousMixture::new(2.0, vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(ContinuousMixture::new(2.0, vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]).is_err());
        assert!(ContinuousMixture::new(2.0, vec![0.0, 2.0], vec![0.0, f64::NAN]).is_err());
        assert!(ContinuousMixture::new(2.0, vec![0.0, 2.0], vec![0.0, f64::NEG_INFINITY]).is_ok());
    }

    #[test]
    fn log_alpha_interpolation() {
        let mix = ContinuousMixture::new(3.0, vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 1.0]).unwrap();
        assert_eq!(mix.log_alpha_at(0.5), 1.0);
        assert_eq!(mix.log_alpha_at(1.0), 2.0);
        assert_eq!(mix.log_alpha_at(2.0), 1.5);
        assert_eq!(mix.log_alpha_at(3.0), 1.0);
        assert_eq!(mix.log_alpha_at(-0.1), f64::NEG_INFINITY);
        assert_eq!(mix.log_alpha_at(3.1), f64::NEG_INFINITY);
        assert!(mix.is_log_concave());
        let bad = ContinuousMixture::new(3.0, vec![0.0, 1.0, 3.0], vec![0.0, -1.0, 1.0]).unwrap();
        assert!(!bad.is_log_concave());
        let gap = ContinuousMixture::new(
            3.0,
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0, f64::NEG_INFINITY, 0.0, 0.0],
        )
        .unwrap();
        assert!(!gap.is_log_concave());
    }

    #[test]
    fn uniform_alpha_matches_riemann_oracle() {
        let mix = ContinuousMixture::constant(2.0, 0.0).unwrap();
        let oracle = riemann_density(&mix, 0.5, 1_000_000);
        let got = eval(mix).density(0.5).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn zero_mixture() {
        let mix = ContinuousMixture::constant(3.0, f64::NEG_INFINITY).unwrap();
        assert!(mix.is_identically_zero());
        let ev = eval(mix);
        assert_eq!(ev.density(0.4).unwrap(), 0.0);
        assert_eq!(ev.normalization(), Err(Error::Degenerate));
    }

    #[test]
    fn narrow_support_approaches_single_component() {
        // α = 1/width on [1 - w/2, 1 + w/2], M = 2.
        let x: f64 = 0.3;
        let want = 2.0 * (1.0 - x) * x;
        let mut last = f64::INFINITY;
        for &w in &[0.2f64, 0.05, 0.0125] {
            let l = -w.ln();
            let mix = ContinuousMixture::new(
                2.0,
                vec![0.0, 1.0 - w / 2.0, 1.0 + w / 2.0, 2.0],
                vec![f64::NEG_INFINITY, l, l, f64::NEG_INFINITY],
            )
            .unwrap();
            let err = (eval(mix).density(x).unwrap() - want).abs();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn constant_alpha_first_derivative_is_boundary_only() {
        // With α ≡ 1 the f' kernel is nonzero only on (-1, 0) and (M-1, M).
        let mix = ContinuousMixture::constant(3.5, 0.0).unwrap();
        let ev = eval(mix.clone());
        let x = 0.4;
        let e = ev.derivatives(x).unwrap();
        let m: f64 = 3.5;
        let boundary = |a: f64, b: f64, sign: f64| {
            quadrature::integrate(a, b, &QuadratureConfig::default(), |s| {
                sign * crate::special::ext_binom_value(m - 1.0, s)
                    * (1.0 - x).powf(s)
                    * x.powf(m - 1.0 - s)
            })
        };
        let want = m * (boundary(-1.0, 0.0, -1.0) + boundary(m - 1.0, m, 1.0));
        assert!((e.d1 - want).abs() <= 1e-10 * want.abs());
    }

    #[test]
    fn derivatives_match_direct_differentiation() {
        let cases = [
            ContinuousMixture::new(3.7, vec![0.0, 1.2, 2.5, 3.7], vec![-0.5, 0.8, 0.3, -1.9])
                .unwrap(),
            ContinuousMixture::new(1.5, vec![0.0, 0.7, 1.5], vec![0.0, 0.4, -0.2]).unwrap(),
            ContinuousMixture::new(6.0, vec![0.0, 2.0, 6.0], vec![f64::NEG_INFINITY, 0.0, -2.0])
                .unwrap(),
            ContinuousMixture::new(2.0, vec![0.0, 2.0], vec![0.0, 2.0 * 2f64.ln()]).unwrap(),
        ];
        for mix in cases {
            let ev = eval(mix.clone());
            for &x in &[0.02, 0.3, 0.5, 0.77, 0.98] {
                let e = ev.derivatives(x).unwrap();
                let (f, f1, f2) = direct_derivatives(&mix, x);
                assert!((e.value - f).abs() <= 1e-11 * f, "f at {x}");
                assert!(
                    (e.d1 - f1).abs() <= 1e-9 * (f1.abs() + f),
                    "f' at {x}: {} vs {f1}",
                    e.d1
                );
                assert!(
                    (e.d2 - f2).abs() <= 1e-9 * (f2.abs() + f),
                    "f'' at {x}: {} vs {f2}",
                    e.d2
                );
            }
        }
    }

    #[test]
    fn normalization_matches_quadrature_of_density() {
        let mix = ContinuousMixture::new(4.5, vec![0.0, 2.0, 4.5], vec![0.0, 1.0, -0.5]).unwrap();
        let ev = eval(mix);
        let norm = ev.normalization().unwrap();
        let cfg = QuadratureConfig {
            panels_per_unit: 64,
            ..QuadratureConfig::default()
        };
        let q = quadrature::integrate(0.0, 1.0, &cfg, |x| ev.density(x).unwrap());
        assert!((q - norm).abs() <= 1e-6 * norm, "{q} vs {norm}");
        assert!((ev.cdf(1.0).unwrap() - norm).abs() <= 1e-4 * norm);
        assert_eq!(ev.cdf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn simpson_rule_reports_refinement_failure_near_endpoint() {
        let mix = ContinuousMixture::constant(5.0, 0.0).unwrap();
        let cfg = QuadratureConfig {
            rule: crate::quadrature::QuadratureRule::Simpson,
            panels_per_unit: 64,
            ..QuadratureConfig::default()
        };
        let ev = ContinuousEvaluator::new(mix, cfg);
        assert!(ev.density(0.5).is_ok());
        assert!(matches!(
            ev.derivatives(1e-7),
            Err(Error::QuadratureFailure { .. })
        ));
    }
}
