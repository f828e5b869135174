//! Executable checks of the combinatorial machinery behind the curvature bound.
//!
//! * [`check_majorization`]: the majorization trick, for sequences and for
//!   tabulated functions.
//! * [`lemma2_continuous`] / [`lemma2_discrete`]: the window inequalities
//!   between `C(M-1, s) C(M-1, n-s)` and `C(M, s) C(M-2, n-s)`, by quadrature and
//!   in exact integer arithmetic respectively.
//! * [`core_inequality`] and [`coefficient_inequality`]: the per-coefficient
//!   inequalities whose sum over `n` is the curvature margin of a discrete mixture.
//! * [`brute_force_logconcavity`]: the plain definition, as an independent oracle.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::math;
use crate::mixture::is_log_concave_sequence;
use crate::mixture::Density;
use crate::quadrature::{self, QuadratureConfig};
use crate::random;
use crate::special::{ext_binom_value, int_binom_signed_top};

/// Which side is expected to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `lhs ≥ rhs`
    AtLeast,
    /// `lhs ≤ rhs`
    AtMost,
}

/// Selector for the window inequalities. The continuous ones integrate over
/// the sets `A`, `B`, `C`; the discrete ones sum over the matching index ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaInequality {
    Ineq4,
    Ineq5,
    Ineq6,
    Ineq2p1,
    Ineq2p2,
    Ineq2p3,
}

impl LemmaInequality {
    pub const CONTINUOUS: [LemmaInequality; 3] = [Self::Ineq4, Self::Ineq5, Self::Ineq6];
    pub const DISCRETE: [LemmaInequality; 3] = [Self::Ineq2p1, Self::Ineq2p2, Self::Ineq2p3];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ineq4 => "ineq4",
            Self::Ineq5 => "ineq5",
            Self::Ineq6 => "ineq6",
            Self::Ineq2p1 => "ineq2p1",
            Self::Ineq2p2 => "ineq2p2",
            Self::Ineq2p3 => "ineq2p3",
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Self::Ineq5 | Self::Ineq2p2 => Direction::AtMost,
            _ => Direction::AtLeast,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Ineq2p1 | Self::Ineq2p2 | Self::Ineq2p3)
    }
}

/// Signed slack of `lhs` against `rhs` in the expected direction.
fn directed_margin(direction: Direction, lhs: f64, rhs: f64) -> f64 {
    match direction {
        Direction::AtLeast => lhs - rhs,
        Direction::AtMost => rhs - lhs,
    }
}

// ---------------------------------------------------------------------------
// Continuous window inequalities.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousLemmaCase {
    pub order: f64,
    pub n: f64,
    /// Window `q` as requested.
    pub window: f64,
    /// Window after clipping to the widest difference the set admits.
    pub effective_window: f64,
    pub which: LemmaInequality,
    /// Integration interval; empty when `lo >= hi`.
    pub interval: (f64, f64),
    pub lhs: f64,
    pub rhs: f64,
}

impl ContinuousLemmaCase {
    pub fn clipped(&self) -> bool {
        self.effective_window < self.window
    }

    /// Slack in the expected direction; negative means the inequality fails.
    pub fn margin(&self) -> f64 {
        directed_margin(self.which.direction(), self.lhs, self.rhs)
    }

    pub fn holds(&self, abs_tol: f64) -> bool {
        self.margin() >= -abs_tol
    }
}

/// Integration interval for the set behind `which`.
///
/// Each set is `{ s : |2s - c2| ≤ q }` intersected with lower bounds on `s` and
/// `n - s`. `q` is clipped to the widest difference those bounds allow, so the
/// set is the symmetric interval `[c - q/2, c + q/2]` around its centre `c`.
/// Returns `(lo, hi, q_effective)`.
pub fn lemma2_interval(order: f64, n: f64, q: f64, which: LemmaInequality) -> (f64, f64, f64) {
    let (center2, widest) = match which {
        // A: s ≥ 0, n - s ≤ M
        LemmaInequality::Ineq4 => (n, n.min(2.0 * order - n)),
        // B: s ≥ 0, n + 1 - s ≤ M
        LemmaInequality::Ineq5 => (n + 1.0, (n + 1.0).min(2.0 * order - n - 1.0)),
        // C: s ≥ -1, n + 1 - s ≤ M
        LemmaInequality::Ineq6 => (n, (n + 2.0).min(2.0 * order - n - 2.0)),
        _ => (n, 0.0),
    };
    let q_eff = q.min(widest);
    if !(q_eff > 0.0) {
        return (0.0, 0.0, q_eff.max(0.0));
    }
    (0.5 * (center2 - q_eff), 0.5 * (center2 + q_eff), q_eff)
}

fn integrate_checked(
    a: f64,
    b: f64,
    quad: &QuadratureConfig,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    let fine = quadrature::integrate(a, b, quad, &f);
    let coarse = quadrature::integrate(a, b, &quad.coarsened(), &f);
    let difference = (fine - coarse).abs();
    if !(difference <= quad.abs_tol * fine.abs().max(1.0)) {
        return Err(Error::QuadratureFailure {
            difference,
            tolerance: quad.abs_tol,
        });
    }
    Ok(fine)
}

/// Both sides of a continuous window inequality, by quadrature.
///
/// Needs `M > 1`, `q > 0`, `n > -2`. Binomials are the `1/Γ` continuation, so
/// `C(M-2, t)` may be negative for `t` near `M`.
pub fn lemma2_continuous(
    order: f64,
    n: f64,
    q: f64,
    which: LemmaInequality,
    quad: &QuadratureConfig,
) -> Result<ContinuousLemmaCase> {
    if !(order > 1.0) {
        return Err(Error::Domain {
            what: "lemma order M (need M > 1)",
            value: order,
        });
    }
    if !(q > 0.0) {
        return Err(Error::Domain {
            what: "lemma window q (need q > 0)",
            value: q,
        });
    }
    if !(n > -2.0) {
        return Err(Error::Domain {
            what: "lemma index n (need n > -2)",
            value: n,
        });
    }
    if which.is_discrete() {
        return Err(Error::Domain {
            what: "continuous lemma selector",
            value: f64::NAN,
        });
    }
    let (lo, hi, q_eff) = lemma2_interval(order, n, q, which);
    let mut case = ContinuousLemmaCase {
        order,
        n,
        window: q,
        effective_window: q_eff,
        which,
        interval: (lo, hi),
        lhs: 0.0,
        rhs: 0.0,
    };
    if !(hi > lo) {
        return Ok(case);
    }
    let m = order;
    case.lhs = integrate_checked(lo, hi, quad, |s| {
        ext_binom_value(m - 1.0, s) * ext_binom_value(m - 1.0, n - s)
    })?;
    case.rhs = match which {
        LemmaInequality::Ineq6 => integrate_checked(lo, hi, quad, |s| {
            ext_binom_value(m, s + 1.0) * ext_binom_value(m - 2.0, n - s - 1.0)
        })?,
        _ => integrate_checked(lo, hi, quad, |s| {
            ext_binom_value(m, s) * ext_binom_value(m - 2.0, n - s)
        })?,
    };
    Ok(case)
}

/// `count` seeded random cases with `M ∈ (1, 20]`, `n ∈ (-2, 2M-2)`,
/// `q ∈ (0, 2M)`, all three inequalities each.
pub fn continuous_sweep(
    seed: u64,
    count: usize,
    quad: &QuadratureConfig,
) -> Result<Vec<ContinuousLemmaCase>> {
    let mut rng = random::seeded(seed);
    let mut out = Vec::with_capacity(count * 3);
    for _ in 0..count {
        let m = 20.0 - random::uniform(&mut rng, 0.0, 19.0);
        let n = random::uniform(&mut rng, -2.0, 2.0 * m - 2.0).max(-2.0 + 1e-12);
        let q = (2.0 * m - random::uniform(&mut rng, 0.0, 2.0 * m)).max(1e-12);
        for which in LemmaInequality::CONTINUOUS {
            out.push(lemma2_continuous(m, n, q, which, quad)?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Discrete window inequalities, exact.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteLemmaCase {
    pub order: u64,
    pub n: u64,
    pub k: i64,
    pub which: LemmaInequality,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl DiscreteLemmaCase {
    pub fn holds(&self) -> bool {
        match self.which.direction() {
            Direction::AtLeast => self.lhs >= self.rhs,
            Direction::AtMost => self.lhs <= self.rhs,
        }
    }

    /// Exact comparison of the two sides.
    pub fn ordering(&self) -> Ordering {
        self.lhs.cmp(&self.rhs)
    }

    /// Slack in the expected direction, rounded to `f64`.
    pub fn margin(&self) -> f64 {
        let l = self.lhs.to_f64().unwrap_or(f64::INFINITY);
        let r = self.rhs.to_f64().unwrap_or(f64::INFINITY);
        directed_margin(self.which.direction(), l, r)
    }
}

/// Both sides of a discrete window inequality in exact arithmetic.
///
/// `M ≥ 1`, `n ≥ 0`, `k ≤ (n+1)/2`; `C(top, i)` is zero for `i < 0` and for
/// `i > top ≥ 0`. The row `top = -1` (from `M - 2` at `M = 1`) is `(-1)^i`, see
/// [`int_binom_signed_top`].
pub fn lemma2_discrete(
    order: u64,
    n: u64,
    k: i64,
    which: LemmaInequality,
) -> Result<DiscreteLemmaCase> {
    if order < 1 {
        return Err(Error::Domain {
            what: "lemma order M (need M >= 1)",
            value: order as f64,
        });
    }
    if 2 * k > n as i64 + 1 {
        return Err(Error::Domain {
            what: "lemma k (need k <= (n+1)/2)",
            value: k as f64,
        });
    }
    if !which.is_discrete() {
        return Err(Error::Domain {
            what: "discrete lemma selector",
            value: f64::NAN,
        });
    }
    let m = order as i64;
    let ni = n as i64;
    let upper = match which {
        LemmaInequality::Ineq2p2 => ni - k + 1,
        _ => ni - k,
    };
    let mut lhs = BigInt::ZERO;
    let mut rhs = BigInt::ZERO;
    // Terms with i outside [-1, n + 1] vanish on both sides.
    for i in k.max(-1)..=upper.min(ni + 1) {
        lhs += int_binom_signed_top(m - 1, i) * int_binom_signed_top(m - 1, ni - i);
        rhs += match which {
            LemmaInequality::Ineq2p3 => {
                int_binom_signed_top(m, i + 1) * int_binom_signed_top(m - 2, ni - i - 1)
            }
            _ => int_binom_signed_top(m, i) * int_binom_signed_top(m - 2, ni - i),
        };
    }
    Ok(DiscreteLemmaCase {
        order,
        n,
        k,
        which,
        lhs,
        rhs,
    })
}

/// Range of `k` swept for a given `n`: from -1 (every smaller `k` gives the
/// same full-range sums) up to the largest `k` with a nonempty index range.
pub fn discrete_k_range(n: u64, which: LemmaInequality) -> core::ops::RangeInclusive<i64> {
    let n = n as i64;
    let top = match which {
        LemmaInequality::Ineq2p2 => (n + 1).div_euclid(2),
        _ => n.div_euclid(2),
    };
    -1..=top
}

/// Every `(M, n, k, which)` with `1 ≤ M ≤ max_order`, `0 ≤ n ≤ 2M-2`, `k` in
/// [`discrete_k_range`].
pub fn discrete_sweep(max_order: u64) -> Vec<DiscreteLemmaCase> {
    let mut out = Vec::new();
    for m in 1..=max_order {
        for n in 0..=(2 * m - 2) {
            for which in LemmaInequality::DISCRETE {
                for k in discrete_k_range(n, which) {
                    out.push(lemma2_discrete(m, n, k, which).expect("sweep parameters are valid"));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Majorization trick.

/// Inputs for the majorization trick.
#[derive(Debug, Clone, PartialEq)]
pub enum MajorizationInstance {
    /// Finite sequences `a, b, u, v` of equal length.
    Sequences {
        a: Vec<f64>,
        b: Vec<f64>,
        u: Vec<f64>,
        v: Vec<f64>,
    },
    /// Functions sampled on a uniform grid over `[0, length]`; integrals use
    /// trapezoid weights, and the running integrals are the partial sums of the
    /// same weighted samples.
    Tabulated {
        length: f64,
        a: Vec<f64>,
        b: Vec<f64>,
        u: Vec<f64>,
        v: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationReport {
    pub hypotheses_ok: bool,
    pub conclusion_ok: bool,
    /// `Σ a u` (or `∫ a u`).
    pub lhs: f64,
    /// `Σ b v` (or `∫ b v`).
    pub rhs: f64,
    /// Names of the hypotheses that failed.
    pub failed: Vec<&'static str>,
}

/// Checks the hypotheses (`a` nonincreasing, `a ≥ b ≥ 0`, `u, v ≥ 0`, running
/// sums of `u` dominate those of `v`) and the conclusion `Σ a u ≥ Σ b v`.
///
/// Running-sum domination is tested with a relative slack of 1e-12 and the
/// conclusion with 1e-10, both scaled by the magnitudes involved.
pub fn check_majorization(inst: &MajorizationInstance) -> MajorizationReport {
    let ([a, b, u, v], weights) = match inst {
        MajorizationInstance::Sequences { a, b, u, v } => ([a, b, u, v], alloc::vec![1.0; a.len()]),
        MajorizationInstance::Tabulated { length, a, b, u, v } => {
            let n = a.len();
            let h = if n > 1 { length / (n - 1) as f64 } else { 0.0 };
            let w = (0..n)
                .map(|j| if j == 0 || j + 1 == n { 0.5 * h } else { h })
                .collect();
            ([a, b, u, v], w)
        }
    };
    let mut failed = Vec::new();
    let len = a.len();
    if b.len() != len || u.len() != len || v.len() != len {
        failed.push("equal lengths");
        return MajorizationReport {
            hypotheses_ok: false,
            conclusion_ok: false,
            lhs: f64::NAN,
            rhs: f64::NAN,
            failed,
        };
    }
    if a.windows(2).any(|w| w[1] > w[0]) {
        failed.push("a nonincreasing");
    }
    if a.iter().zip(b).any(|(x, y)| y > x) {
        failed.push("a >= b");
    }
    if b.iter().any(|y| *y < 0.0) {
        failed.push("b >= 0");
    }
    if u.iter().chain(v).any(|y| *y < 0.0) {
        failed.push("u, v >= 0");
    }
    let mut big_u = 0.0;
    let mut big_v = 0.0;
    let mut running_ok = true;
    for j in 0..len {
        big_u += weights[j] * u[j];
        big_v += weights[j] * v[j];
        if big_v > big_u + 1e-12 * big_u.abs().max(big_v.abs()) {
            running_ok = false;
        }
    }
    if !running_ok {
        failed.push("running sums of u dominate v");
    }
    let lhs: f64 = (0..len).map(|j| weights[j] * a[j] * u[j]).sum();
    let rhs: f64 = (0..len).map(|j| weights[j] * b[j] * v[j]).sum();
    let scale: f64 = (0..len)
        .map(|j| weights[j] * (a[j] * u[j]).abs().max((b[j] * v[j]).abs()))
        .sum();
    MajorizationReport {
        hypotheses_ok: failed.is_empty(),
        conclusion_ok: lhs >= rhs - 1e-10 * scale,
        lhs,
        rhs,
        failed,
    }
}

// ---------------------------------------------------------------------------
// Coefficient-level inequalities for discrete mixtures.

/// The three coefficient inequalities whose combination gives the per-`n`
/// margin inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreInequality {
    /// `Σ α_i α_j C(M-1,i) C(M-1,j) ≥ Σ α_i α_j C(M,i) C(M-2,j)`
    Aligned,
    /// `Σ α_i α_{j+1} C(M-1,i) C(M-1,j) ≤ Σ α_i α_{j+1} C(M,i) C(M-2,j)`
    Offset,
    /// `Σ α_{i+1} α_{j+1} C(M-1,i) C(M-1,j) ≥ Σ α_i α_{j+2} C(M,i) C(M-2,j)`
    Exchange,
}

impl CoreInequality {
    pub const ALL: [CoreInequality; 3] = [Self::Aligned, Self::Offset, Self::Exchange];

    pub fn direction(&self) -> Direction {
        match self {
            Self::Offset => Direction::AtMost,
            _ => Direction::AtLeast,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientComparison {
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    /// Whether the weights passed the log-concavity check.
    pub weights_log_concave: bool,
}

impl CoefficientComparison {
    pub fn margin(&self) -> f64 {
        directed_margin(self.direction, self.lhs, self.rhs)
    }

    /// Holds within `rel_tol` times the larger side.
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.margin() >= -rel_tol * self.lhs.abs().max(self.rhs.abs())
    }
}

/// Rows `C(M, ·)`, `C(M-1, ·)`, `C(M-2, ·)` as floats, rounded from exact
/// values, for indices `0..=2M+2`.
struct BinomRows {
    rows: [Vec<f64>; 3],
}

impl BinomRows {
    fn new(order: usize) -> Self {
        let m = order as i64;
        let row = |top: i64| -> Vec<f64> {
            (0..=2 * m + 2)
                .map(|i| {
                    int_binom_signed_top(top, i)
                        .to_f64()
                        .unwrap_or(f64::INFINITY)
                })
                .collect()
        };
        Self {
            rows: [row(m), row(m - 1), row(m - 2)],
        }
    }

    /// `C(M - drop, i)`.
    fn get(&self, drop: usize, i: i64) -> f64 {
        let r = &self.rows[drop];
        if i < 0 || i as usize >= r.len() {
            0.0
        } else {
            r[i as usize]
        }
    }
}

fn alpha_at(weights: &[f64], i: i64) -> f64 {
    if i < 0 || i as usize >= weights.len() {
        0.0
    } else {
        weights[i as usize]
    }
}

fn validate_weights(weights: &[f64], n: i64) -> Result<usize> {
    if weights.len() < 2 || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidMixture(
            "weights must be at least two finite nonnegative values",
        ));
    }
    let m = weights.len() - 1;
    if n < 0 || n > 2 * m as i64 - 2 {
        return Err(Error::Domain {
            what: "coefficient index n (need 0 <= n <= 2M-2)",
            value: n as f64,
        });
    }
    Ok(m)
}

/// Both sides of one of the coefficient inequalities at index `n`, summing
/// over all `i + j = n` with out-of-range weights and binomials zero.
pub fn core_inequality(
    weights: &[f64],
    n: i64,
    which: CoreInequality,
) -> Result<CoefficientComparison> {
    let m = validate_weights(weights, n)?;
    let rows = BinomRows::new(m);
    Ok(core_with_rows(weights, n, which, &rows))
}

fn core_with_rows(
    weights: &[f64],
    n: i64,
    which: CoreInequality,
    rows: &BinomRows,
) -> CoefficientComparison {
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for i in -1..=n + 1 {
        let j = n - i;
        let left_binom = rows.get(1, i) * rows.get(1, j);
        let right_binom = rows.get(0, i) * rows.get(2, j);
        let (l, r) = match which {
            CoreInequality::Aligned => {
                let aa = alpha_at(weights, i) * alpha_at(weights, j);
                (aa, aa)
            }
            CoreInequality::Offset => {
                let aa = alpha_at(weights, i) * alpha_at(weights, j + 1);
                (aa, aa)
            }
            CoreInequality::Exchange => (
                alpha_at(weights, i + 1) * alpha_at(weights, j + 1),
                alpha_at(weights, i) * alpha_at(weights, j + 2),
            ),
        };
        lhs += l * left_binom;
        rhs += r * right_binom;
    }
    CoefficientComparison {
        lhs,
        rhs,
        direction: which.direction(),
        weights_log_concave: is_log_concave_sequence(weights, 1e-12),
    }
}

/// Coefficient of `(1-x)^n x^(2M-2-n)` in the margin polynomial, split into
/// `Σ Δα_i Δα_j C(M-1,i) C(M-1,j)` and `Σ α_i Δ²α_j C(M,i) C(M-2,j)`, with
/// `Δα_i = α_i - α_{i+1}` and `Δ²α_j = α_j - 2α_{j+1} + α_{j+2}`.
pub fn coefficient_inequality(weights: &[f64], n: i64) -> Result<CoefficientComparison> {
    let m = validate_weights(weights, n)?;
    let rows = BinomRows::new(m);
    Ok(coefficient_with_rows(weights, n, &rows))
}

fn coefficient_with_rows(weights: &[f64], n: i64, rows: &BinomRows) -> CoefficientComparison {
    let d1 = |i: i64| alpha_at(weights, i) - alpha_at(weights, i + 1);
    let d2 =
        |i: i64| alpha_at(weights, i) - 2.0 * alpha_at(weights, i + 1) + alpha_at(weights, i + 2);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for i in -1..=n + 1 {
        let j = n - i;
        lhs += d1(i) * d1(j) * rows.get(1, i) * rows.get(1, j);
        rhs += alpha_at(weights, i) * d2(j) * rows.get(0, i) * rows.get(2, j);
    }
    CoefficientComparison {
        lhs,
        rhs,
        direction: Direction::AtLeast,
        weights_log_concave: is_log_concave_sequence(weights, 1e-12),
    }
}

/// `M(M-1) Σ_n (lhs_n - rhs_n) (1-x)^n x^(2M-2-n)`, which equals the raw margin
/// `((M-1)/M) g'(x)² - g(x) g''(x)`.
pub fn reconstruct_margin(weights: &[f64], x: f64) -> Result<f64> {
    let m = validate_weights(weights, 0)?;
    let rows = BinomRows::new(m);
    let mf = m as f64;
    let top = 2 * m as i64 - 2;
    let mut acc = 0.0;
    for n in 0..=top {
        let c = coefficient_with_rows(weights, n, &rows);
        let basis = math::powi(1.0 - x, n as i32) * math::powi(x, (top - n) as i32);
        acc += (c.lhs - c.rhs) * basis;
    }
    Ok(mf * (mf - 1.0) * acc)
}

// ---------------------------------------------------------------------------
// Definition-level oracle.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceReport {
    pub ok: bool,
    /// `(x, y, λ)` with `f(λx + (1-λ)y) < f(x)^λ f(y)^(1-λ)`.
    pub witness: Option<(f64, f64, f64)>,
}

/// Tests `f(λx + (1-λ)y) ≥ f(x)^λ f(y)^(1-λ)` on `samples` random triples in
/// `(0, 1)`, with slack `1e-10 · max(f(x), f(y))`. Triples where `f(x)` or `f(y)`
/// vanishes are skipped.
pub fn brute_force_logconcavity<D: Density + ?Sized>(
    mix: &D,
    samples: usize,
    seed: u64,
) -> Result<BruteForceReport> {
    let mut rng = random::seeded(seed);
    for _ in 0..samples {
        let x = random::unit(&mut rng);
        let y = random::unit(&mut rng);
        let lambda = random::unit(&mut rng);
        if x <= 0.0 || y <= 0.0 || lambda <= 0.0 {
            continue;
        }
        let fx = mix.density(x)?;
        let fy = mix.density(y)?;
        if !(fx > 0.0 && fy > 0.0) {
            continue;
        }
        let fz = mix.density(lambda * x + (1.0 - lambda) * y)?;
        let rhs = math::exp(lambda * math::ln(fx) + (1.0 - lambda) * math::ln(fy));
        if fz < rhs - 1e-10 * fx.max(fy) {
            return Ok(BruteForceReport {
                ok: false,
                witness: Some((x, y, lambda)),
            });
        }
    }
    Ok(BruteForceReport {
        ok: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::DiscreteMixture;
    use crate::special::int_binom_exact;
    use alloc::vec;

    #[test]
    fn discrete_examples() {
        let c = lemma2_discrete(3, 2, 1, LemmaInequality::Ineq2p1).unwrap();
        assert_eq!(
            (c.lhs.clone(), c.rhs.clone()),
            (BigInt::from(4), BigInt::from(3))
        );
        assert!(c.holds());
        let c = lemma2_discrete(3, 2, 0, LemmaInequality::Ineq2p1).unwrap();
        assert_eq!(
            (c.lhs.clone(), c.rhs.clone()),
            (BigInt::from(6), BigInt::from(6))
        );
        let far = lemma2_discrete(3, 2, -40, LemmaInequality::Ineq2p1).unwrap();
        assert_eq!((far.lhs, far.rhs), (c.lhs, c.rhs));
        assert!(lemma2_discrete(3, 2, 2, LemmaInequality::Ineq2p1).is_err());
        assert!(lemma2_discrete(3, 2, 0, LemmaInequality::Ineq4).is_err());
    }

    #[test]
    fn order_one_uses_signed_row() {
        // C(-1, 0) = 1, so the full-range sums are C(0, 0) = 1 on both sides.
        for which in LemmaInequality::DISCRETE {
            let c = lemma2_discrete(1, 0, -1, which).unwrap();
            assert_eq!(
                (c.lhs.clone(), c.rhs.clone()),
                (BigInt::from(1), BigInt::from(1)),
                "{which:?}"
            );
            assert!(c.holds());
        }
    }

    #[test]
    fn k_below_minus_one_matches_minus_one() {
        for which in LemmaInequality::DISCRETE {
            for m in 1..6 {
                for n in 0..=(2 * m - 2) {
                    let a = lemma2_discrete(m, n, -1, which).unwrap();
                    let b = lemma2_discrete(m, n, -7, which).unwrap();
                    assert_eq!((a.lhs, a.rhs), (b.lhs, b.rhs));
                }
            }
        }
    }

    #[test]
    fn continuous_degenerate_window() {
        let quad = QuadratureConfig::default();
        let c = lemma2_continuous(3.0, 2.0, 1e-14, LemmaInequality::Ineq4, &quad).unwrap();
        assert!(c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12);
        let empty = lemma2_continuous(3.0, -1.5, 1.0, LemmaInequality::Ineq4, &quad).unwrap();
        assert_eq!((empty.lhs, empty.rhs), (0.0, 0.0));
        assert!(lemma2_continuous(1.0, 2.0, 1.0, LemmaInequality::Ineq4, &quad).is_err());
        assert!(lemma2_continuous(3.0, -2.0, 1.0, LemmaInequality::Ineq4, &quad).is_err());
        assert!(lemma2_continuous(3.0, 2.0, 0.0, LemmaInequality::Ineq4, &quad).is_err());
    }

    #[test]
    fn continuous_interval_clipping() {
        let (lo, hi, q) = lemma2_interval(2.0, 2.0, 2.0, LemmaInequality::Ineq4);
        assert_eq!((lo, hi, q), (0.0, 2.0, 2.0));
        let (lo, hi, q) = lemma2_interval(2.0, 2.0, 5.0, LemmaInequality::Ineq4);
        assert_eq!((lo, hi, q), (0.0, 2.0, 2.0));
        let (lo, hi, _) = lemma2_interval(4.0, 3.0, 10.0, LemmaInequality::Ineq5);
        assert_eq!((lo, hi), (0.0, 4.0));
        let (lo, hi, _) = lemma2_interval(4.0, 3.0, 10.0, LemmaInequality::Ineq6);
        assert_eq!((lo, hi), (0.0, 3.0));
        let (lo, hi, _) = lemma2_interval(6.0, 1.0, 10.0, LemmaInequality::Ineq6);
        assert_eq!((lo, hi), (-1.0, 2.0));
    }

    #[test]
    fn majorization_examples() {
        let r = check_majorization(&MajorizationInstance::Sequences {
            a: vec![3.0, 2.0, 1.0],
            b: vec![1.0, 1.0, 1.0],
            u: vec![1.0, 1.0, 1.0],
            v: vec![1.0, 0.0, 1.0],
        });
        assert!(r.hypotheses_ok && r.conclusion_ok);
        assert_eq!((r.lhs, r.rhs), (6.0, 2.0));

        let r = check_majorization(&MajorizationInstance::Sequences {
            a: vec![1.0; 4],
            b: vec![1.0; 4],
            u: vec![0.3, 2.0, 0.0, 1.5],
            v: vec![0.3, 2.0, 0.0, 1.5],
        });
        assert!(r.hypotheses_ok && r.conclusion_ok);
        assert_eq!(r.lhs, r.rhs);

        // Increasing a breaks the hypotheses; the report says which.
        let r = check_majorization(&MajorizationInstance::Sequences {
            a: vec![1.0, 2.0],
            b: vec![0.0, 0.0],
            u: vec![1.0, 1.0],
            v: vec![1.0, 1.0],
        });
        assert!(!r.hypotheses_ok);
        assert_eq!(r.failed, vec!["a nonincreasing"]);

        // Running sums of v overtake u: hypotheses fail and so does the conclusion.
        let r = check_majorization(&MajorizationInstance::Sequences {
            a: vec![1.0, 1.0],
            b: vec![1.0, 1.0],
            u: vec![0.0, 1.0],
            v: vec![2.0, 0.0],
        });
        assert!(!r.hypotheses_ok && !r.conclusion_ok);
    }

    #[test]
    fn tabulated_majorization() {
        let n = 101;
        let xs: Vec<f64> = (0..n).map(|j| j as f64 / (n - 1) as f64).collect();
        let r = check_majorization(&MajorizationInstance::Tabulated {
            length: 1.0,
            a: xs.iter().map(|x| 2.0 - x).collect(),
            b: xs.iter().map(|x| 1.0 - x).collect(),
            u: vec![1.0; n],
            v: xs.iter().map(|x| 2.0 * x).collect(),
        });
        assert!(r.hypotheses_ok && r.conclusion_ok, "{r:?}");
        assert!((r.lhs - 1.5).abs() < 1e-12);
    }

    #[test]
    fn core_inequalities_uniform_weights_are_vandermonde() {
        let w = vec![1.0; 6];
        let m = 5u64;
        for n in 0..=(2 * m as i64 - 2) {
            let c = core_inequality(&w, n, CoreInequality::Aligned).unwrap();
            let v = int_binom_exact(2 * m - 2, n).to_f64().unwrap();
            assert_eq!(c.lhs, v);
            assert_eq!(c.rhs, v);
            assert!(c.weights_log_concave);
        }
    }

    #[test]
    fn coefficient_geometric_is_tight() {
        let w: Vec<f64> = (0..=7).map(|i| 3f64.powi(i)).collect();
        for n in 0..=12 {
            let c = coefficient_inequality(&w, n).unwrap();
            assert!(
                (c.lhs - c.rhs).abs() <= 1e-12 * c.lhs.abs().max(c.rhs.abs()),
                "n={n}: {c:?}"
            );
        }
    }

    #[test]
    fn coefficient_uniform_m2() {
        let w = vec![1.0, 1.0, 1.0];
        for n in 0..=2 {
            let c = coefficient_inequality(&w, n).unwrap();
            assert!(c.holds(0.0));
            assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        }
    }

    #[test]
    fn margin_reconstruction_matches_evaluators() {
        let w = vec![0.5, 1.3, 2.0, 1.7, 0.4];
        let g = DiscreteMixture::new(w.clone()).unwrap();
        for &x in &[0.1, 0.45, 0.8] {
            let e = g.derivatives(x).unwrap();
            let want = 0.75 * e.d1 * e.d1 - e.value * e.d2;
            let got = reconstruct_margin(&w, x).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn brute_force_examples() {
        let ok =
            brute_force_logconcavity(&DiscreteMixture::new(vec![1.0, 1.0, 1.0]).unwrap(), 200, 1)
                .unwrap();
        assert!(ok.ok);
        let bad =
            brute_force_logconcavity(&DiscreteMixture::new(vec![1.0, 0.01, 1.0]).unwrap(), 500, 1)
                .unwrap();
        assert!(!bad.ok && bad.witness.is_some());
        for spike in 0..=5 {
            let mut w = vec![0.0; 6];
            w[spike] = 1.0;
            let r = brute_force_logconcavity(&DiscreteMixture::new(w).unwrap(), 300, 2).unwrap();
            assert!(r.ok, "spike at {spike}");
        }
    }
}
