//! Grid certification of log-concavity through the sharpened curvature margin
//!
//! ```text
//! margin(x) = [((M - 1)/M) f'(x)² - f(x) f''(x)] / max(f(x)², 1e-300)
//! ```
//!
//! which is nonnegative for every mixture with log-concave weights and exactly
//! zero for geometric weights. Since `(ln f)'' = -margin - (f'/f)² / M`, a
//! nonnegative margin implies `(ln f)'' ≤ 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::mixture::{Density, DiscreteMixture, EvalResult};
use crate::random;

const MARGIN_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Violated,
    DegenerateZero,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Violated => "violated",
            Verdict::DegenerateZero => "degenerate-zero",
        }
    }
}

/// Which grid criterion decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// The curvature margin from analytic derivatives.
    Margin,
    /// Second differences of `ln f`, used when derivatives cannot be evaluated.
    LogSecondDifference,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Margin => "margin",
            Criterion::LogSecondDifference => "log-second-difference",
        }
    }
}

/// A triple on which `f(λx + (1-λ)y) < f(x)^λ f(y)^(1-λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointWitness {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    /// `f(λx + (1-λ)y)`.
    pub lhs: f64,
    /// `f(x)^λ f(y)^(1-λ)`.
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub grid_points: usize,
    pub eps: f64,
    pub tol: f64,
    pub midpoint_checks: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            grid_points: 1024,
            eps: 1e-6,
            tol: 1e-9,
            midpoint_checks: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityCertificate {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub grid_points: usize,
    pub eps: f64,
    pub tol: f64,
    /// Minimum of the normalized margin over the grid (NaN when not evaluated).
    pub min_margin_eq10: f64,
    /// Largest analytic `(ln f)''` over the grid; nonpositive for log-concave `f`.
    pub min_logcurv: f64,
    /// Grid point of the smallest margin (or largest second difference).
    pub worst_x: f64,
    /// Largest second difference of `ln f` over the grid, divided by `h²`.
    pub max_log_second_difference: f64,
    pub second_difference_ok: bool,
    pub midpoint_checks_run: usize,
    pub midpoint_ok: bool,
    pub witness: Option<MidpointWitness>,
    pub diagnostics: Vec<String>,
}

/// Normalized curvature margin at `x ∈ (0, 1)`.
pub fn curvature_margin<D: Density + ?Sized>(mix: &D, x: f64) -> Result<f64> {
    let e = mix.derivatives(x)?;
    Ok(margin_from(&e, mix.order()))
}

fn margin_from(e: &EvalResult, order: f64) -> f64 {
    let c = (order - 1.0) / order;
    if e.value * e.value >= MARGIN_FLOOR {
        c * e.log_d1 * e.log_d1 - e.curvature_ratio
    } else {
        (c * e.d1 * e.d1 - e.value * e.d2) / MARGIN_FLOOR
    }
}

fn grid(points: usize, eps: f64) -> Vec<f64> {
    let n = points.max(2);
    let span = 1.0 - 2.0 * eps;
    (0..n)
        .map(|j| eps + span * j as f64 / (n - 1) as f64)
        .collect()
}

/// Slack allowed on a second difference of `ln f` values of size `|l|`:
/// rounding in four `ln f` evaluations amplified by `1/h²`.
fn second_difference_slack(l: [f64; 3], order: f64, h: f64, tol: f64) -> f64 {
    let mag = l[0].abs() + 2.0 * l[1].abs() + l[2].abs() + order + 1.0;
    tol + 64.0 * f64::EPSILON * mag / (h * h)
}

/// Checks `f(λx + (1-λ)y) ≥ f(x)^λ f(y)^(1-λ) - 1e-10 · max(f(x), f(y))`.
fn midpoint_holds<D: Density + ?Sized>(
    mix: &D,
    x: f64,
    y: f64,
    lambda: f64,
) -> Result<Option<MidpointWitness>> {
    let fx = mix.density(x)?;
    let fy = mix.density(y)?;
    if !(fx > 0.0 && fy > 0.0) {
        return Ok(None);
    }
    let z = lambda * x + (1.0 - lambda) * y;
    let fz = mix.density(z)?;
    let rhs = math::exp(lambda * math::ln(fx) + (1.0 - lambda) * math::ln(fy));
    if fz >= rhs - 1e-10 * fx.max(fy) {
        Ok(None)
    } else {
        Ok(Some(MidpointWitness {
            x,
            y,
            lambda,
            lhs: fz,
            rhs,
        }))
    }
}

/// Symmetric triples `(c - δ, c + δ, 1/2)` around `center` with shrinking `δ`.
fn search_witness<D: Density + ?Sized>(mix: &D, center: f64, eps: f64) -> Option<MidpointWitness> {
    let reach = (center - eps).min(1.0 - eps - center);
    let mut delta = reach * 0.5;
    while delta > 1e-7 {
        if let Ok(Some(w)) = midpoint_holds(mix, center - delta, center + delta, 0.5) {
            return Some(w);
        }
        delta *= 0.5;
    }
    None
}

/// Certifies log-concavity of `mix` on `[eps, 1 - eps]`.
///
/// Evaluates the margin on `grid_points` equally spaced points, second
/// differences of `ln f` on the same grid, and `midpoint_checks` random
/// definition checks. Certified means the minimum margin is at least `-tol`
/// and no midpoint check failed; it is a statement about the sampled points
/// only. Evaluation errors are reported in `diagnostics`.
pub fn certify<D: Density + ?Sized>(mix: &D, opts: &CertifyOptions) -> ConcavityCertificate {
    let xs = grid(opts.grid_points, opts.eps);
    let mut cert = ConcavityCertificate {
        verdict: Verdict::DegenerateZero,
        criterion: Criterion::Margin,
        grid_points: xs.len(),
        eps: opts.eps,
        tol: opts.tol,
        min_margin_eq10: f64::NAN,
        min_logcurv: f64::NAN,
        worst_x: f64::NAN,
        max_log_second_difference: f64::NAN,
        second_difference_ok: true,
        midpoint_checks_run: 0,
        midpoint_ok: true,
        witness: None,
        diagnostics: Vec::new(),
    };
    if mix.is_identically_zero() {
        return cert;
    }
    let order = mix.order();

    // Margin pass.
    let mut min_margin = f64::INFINITY;
    let mut max_logcurv = f64::NEG_INFINITY;
    let mut worst_margin_x = xs[0];
    let mut derivatives_ok = true;
    let mut log_values = Vec::with_capacity(xs.len());
    for &x in &xs {
        match mix.derivatives(x) {
            Ok(e) => {
                let m = margin_from(&e, order);
                if m < min_margin {
                    min_margin = m;
                    worst_margin_x = x;
                }
                if e.log_d2 > max_logcurv {
                    max_logcurv = e.log_d2;
                }
                log_values.push(e.log_value);
            }
            Err(err) => {
                if derivatives_ok {
                    cert.diagnostics
                        .push(format!("derivatives failed at x={x}: {err}"));
                }
                derivatives_ok = false;
                match mix.density(x) {
                    Ok(v) => log_values.push(math::ln_or_neg_inf(v)),
                    Err(err) => {
                        cert.diagnostics
                            .push(format!("density failed at x={x}: {err}"));
                        cert.verdict = Verdict::Violated;
                        cert.worst_x = x;
                        return cert;
                    }
                }
            }
        }
    }
    if derivatives_ok {
        cert.min_margin_eq10 = min_margin;
        cert.min_logcurv = max_logcurv;
    } else {
        cert.criterion = Criterion::LogSecondDifference;
    }

    // Second differences of ln f on the same grid.
    let h = xs[1] - xs[0];
    let mut max_sd = f64::NEG_INFINITY;
    let mut worst_sd_x = xs[0];
    for j in 1..xs.len() - 1 {
        let l = [log_values[j - 1], log_values[j], log_values[j + 1]];
        if l.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let sd = (l[0] - 2.0 * l[1] + l[2]) / (h * h);
        if sd > max_sd {
            max_sd = sd;
            worst_sd_x = xs[j];
        }
        if sd > second_difference_slack(l, order, h, opts.tol) {
            cert.second_difference_ok = false;
        }
    }
    cert.max_log_second_difference = max_sd;

    // Random definition checks.
    let mut rng = random::seeded(opts.seed);
    let span = 1.0 - 2.0 * opts.eps;
    for _ in 0..opts.midpoint_checks {
        let x = opts.eps + span * random::unit(&mut rng);
        let y = opts.eps + span * random::unit(&mut rng);
        let lambda = random::unit(&mut rng);
        if lambda == 0.0 {
            continue;
        }
        match midpoint_holds(mix, x, y, lambda) {
            Ok(None) => {}
            Ok(Some(w)) => {
                cert.midpoint_ok = false;
                if cert.witness.is_none() {
                    cert.witness = Some(w);
                }
            }
            Err(err) => cert
                .diagnostics
                .push(format!("midpoint check failed: {err}")),
        }
        cert.midpoint_checks_run += 1;
    }

    let grid_ok = match cert.criterion {
        Criterion::Margin => min_margin >= -opts.tol,
        Criterion::LogSecondDifference => cert.second_difference_ok,
    };
    cert.worst_x = match cert.criterion {
        Criterion::Margin => worst_margin_x,
        Criterion::LogSecondDifference => worst_sd_x,
    };
    cert.verdict = if grid_ok && cert.midpoint_ok {
        Verdict::Certified
    } else {
        Verdict::Violated
    };
    // A witness centred on the worst grid point is easier to check by hand
    // than a random one; keep the random one only if that search fails.
    if cert.verdict == Verdict::Violated && cert.worst_x.is_finite() {
        if let Some(w) = search_witness(mix, cert.worst_x, opts.eps) {
            cert.witness = Some(w);
        }
    }
    cert
}

/// Largest `|margin|` over the grid for geometric weights `α_i = r^i`, which
/// make the margin vanish identically. Weights are stored as `r^(i - i_max)`
/// so large orders stay in range.
pub fn sharpness_check(order: usize, ratio: f64, grid_points: usize) -> Result<f64> {
    if !(ratio > 0.0 && ratio.is_finite()) || ratio == 1.0 || order == 0 {
        return Err(crate::Error::Domain {
            what: "geometric ratio (must be positive and != 1)",
            value: ratio,
        });
    }
    let top = if ratio > 1.0 { order as f64 } else { 0.0 };
    let lr = math::ln(ratio);
    let weights: Vec<f64> = (0..=order)
        .map(|i| math::exp((i as f64 - top) * lr))
        .collect();
    let mix = DiscreteMixture::new(weights)?;
    let mut worst: f64 = 0.0;
    for x in grid(grid_points, CertifyOptions::default().eps) {
        worst = worst.max(curvature_margin(&mix, x)?.abs());
    }
    Ok(worst)
}

/// `∂²/∂x² ln[C(M, s) (1-x)^s x^(M-s)] = -s/(1-x)² - (M-s)/x²`.
pub fn kernel_log_curvature(order: f64, s: f64, x: f64) -> f64 {
    let y = 1.0 - x;
    -s / (y * y) - (order - s) / (x * x)
}

/// A point `x ∈ (0, 1)` where the Beta kernel with index `s` outside `[0, M]`
/// is strictly log-convex, or `None` when `s ∈ [0, M]` (the kernel is then
/// log-concave everywhere).
///
/// For `s < 0` the sign of the curvature is that of `-s x² - (M-s)(1-x)²`,
/// increasing in `x`; bisection locates its root `x0` and the midpoint of
/// `(x0, 1)` is returned. `s > M` is the mirror image near `x = 0`.
pub fn find_kernel_failure(order: f64, s: f64) -> Option<f64> {
    if !(s > -1.0 && s < order + 1.0) || (0.0..=order).contains(&s) {
        return None;
    }
    // g(x) has the sign of the curvature and is monotone on (0, 1).
    let g = |x: f64| {
        let y = 1.0 - x;
        -s * x * x - (order - s) * y * y
    };
    let increasing = s < 0.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let positive = g(mid) > 0.0;
        if positive == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Middle of the failure interval, nudged toward its far end if needed.
    let mut x = if increasing {
        0.5 * (hi + 1.0)
    } else {
        0.5 * lo
    };
    for _ in 0..64 {
        if x > 0.0 && x < 1.0 && kernel_log_curvature(order, s, x) > 0.0 {
            return Some(x);
        }
        x = if increasing { 0.5 * (x + 1.0) } else { 0.5 * x };
    }
    None
}
