//! Seeded randomness and random log-concave test instances.
//!
//! Everything is driven by `ChaCha8Rng::seed_from_u64`, so a seed pins the
//! output on every platform.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math;
use crate::mixture::{ContinuousMixture, DiscreteMixture};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)` with 53 random bits.
pub fn unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Uniform integer in `[lo, hi]`.
pub fn int_in<R: RngCore + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    debug_assert!(hi >= lo);
    let span = (hi - lo) as u64 + 1;
    lo + (rng.next_u64() % span) as i64
}

/// Random concave sequence of length `len`: a random starting slope followed
/// by nonnegative random decrements, accumulated twice.
fn concave_sequence<R: RngCore + ?Sized>(rng: &mut R, len: usize, span: f64) -> Vec<f64> {
    let curvature = uniform(rng, 0.0, 1.0);
    let mut slope = uniform(rng, -span, span);
    let mut c = Vec::with_capacity(len);
    let mut acc = 0.0;
    for _ in 0..len {
        c.push(acc);
        acc += slope;
        slope -= curvature * uniform(rng, 0.0, 4.0 * span) / len as f64;
    }
    c
}

/// Log-concave weight vector of order `order`: `α = exp(c - max c)` for a
/// random concave `c`, with a zero prefix and/or suffix a quarter of the time
/// each.
pub fn log_concave_weights<R: RngCore + ?Sized>(rng: &mut R, order: usize) -> Vec<f64> {
    let len = order + 1;
    let c = concave_sequence(rng, len, 2.0);
    let peak = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = c.iter().map(|v| math::exp(v - peak)).collect();
    if len > 3 {
        if unit(rng) < 0.25 {
            let k = int_in(rng, 1, (len / 4).max(1) as i64) as usize;
            w[..k].iter_mut().for_each(|v| *v = 0.0);
        }
        if unit(rng) < 0.25 {
            let k = int_in(rng, 1, (len / 4).max(1) as i64) as usize;
            w[len - k..].iter_mut().for_each(|v| *v = 0.0);
        }
    }
    // Tails can underflow to subnormals where the ratio test loses meaning.
    for v in w.iter_mut() {
        if *v < 1e-280 {
            *v = 0.0;
        }
    }
    w
}

pub fn log_concave_discrete<R: RngCore + ?Sized>(rng: &mut R, order: usize) -> DiscreteMixture {
    DiscreteMixture::new(log_concave_weights(rng, order)).expect("generated weights are valid")
}

/// Random exp-piecewise-linear-concave continuous mixture with `segments`
/// knot intervals on `[0, order]`; one or both end knots are set to `-inf`
/// occasionally.
pub fn log_concave_continuous<R: RngCore + ?Sized>(
    rng: &mut R,
    order: f64,
    segments: usize,
) -> ContinuousMixture {
    let segments = segments.max(1);
    let mut interior: Vec<f64> = (0..segments - 1)
        .map(|_| uniform(rng, 0.0, order))
        .collect();
    interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut knots = Vec::with_capacity(segments + 1);
    knots.push(0.0);
    for s in interior {
        if s > *knots.last().unwrap() + 1e-3 && s < order - 1e-3 {
            knots.push(s);
        }
    }
    knots.push(order);

    let curvature = uniform(rng, 0.0, 1.0);
    let mut slope = uniform(rng, -1.5, 1.5);
    let mut log_alpha = Vec::with_capacity(knots.len());
    let mut acc = 0.0;
    for j in 0..knots.len() {
        log_alpha.push(acc);
        if j + 1 < knots.len() {
            acc += slope * (knots[j + 1] - knots[j]);
            slope -= curvature * uniform(rng, 0.0, 6.0) / knots.len() as f64;
        }
    }
    let n = log_alpha.len();
    if n > 2 && unit(rng) < 0.15 {
        log_alpha[0] = f64::NEG_INFINITY;
    }
    if n > 2 && unit(rng) < 0.15 {
        log_alpha[n - 1] = f64::NEG_INFINITY;
    }
    ContinuousMixture::new(order, knots, log_alpha).expect("generated knots are valid")
}
