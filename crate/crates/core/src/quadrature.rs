//! Composite quadrature rules on panels.
//!
//! Every continuous integral in the crate goes through a [`QuadratureConfig`]:
//! an interval is cut into `ceil(len * panels_per_unit)` equal panels and a
//! fixed rule is applied on each.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
    /// Composite Simpson; `nodes_per_panel` counts subintervals (rounded up to even).
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rule: QuadratureRule,
    pub panels_per_unit: u32,
    pub nodes_per_panel: u32,
    /// Allowed disagreement between this configuration and the next coarser one.
    pub abs_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::GaussLegendre,
            panels_per_unit: 8,
            nodes_per_panel: 16,
            abs_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    /// The configuration one refinement level below this one, used as the
    /// comparison partner for the refinement check.
    pub fn coarsened(&self) -> Self {
        let mut c = *self;
        if self.panels_per_unit >= 2 {
            c.panels_per_unit = self.panels_per_unit.div_ceil(2);
        } else {
            c.nodes_per_panel = (self.nodes_per_panel / 2).max(2);
        }
        c
    }

    pub fn reference_rule(&self) -> ReferenceRule {
        match self.rule {
            QuadratureRule::GaussLegendre => {
                ReferenceRule::gauss_legendre(self.nodes_per_panel.max(1) as usize)
            }
            QuadratureRule::Simpson => ReferenceRule::simpson(self.nodes_per_panel.max(2) as usize),
        }
    }

    /// Number of panels used on an interval of the given length.
    pub fn panels_for(&self, length: f64) -> usize {
        let p = math::ceil(length * self.panels_per_unit.max(1) as f64);
        if p < 1.0 {
            1
        } else {
            p as usize
        }
    }
}

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct ReferenceRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ReferenceRule {
    /// `n`-point Gauss-Legendre rule, nodes by Newton iteration on `P_n`.
    pub fn gauss_legendre(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi initial guess, then Newton on P_n.
            let mut z = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            // Map from [-1, 1] (descending) to [0, 1] (ascending).
            nodes.push(0.5 * (1.0 - z));
            weights.push(0.5 * w);
        }
        Self { nodes, weights }
    }

    /// Composite Simpson with `n` subintervals (`n` rounded up to even).
    pub fn simpson(n: usize) -> Self {
        let n = n + n % 2;
        let h = 1.0 / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n + 1);
        for j in 0..=n {
            nodes.push(j as f64 * h);
            let c = if j == 0 || j == n {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            weights.push(c * h / 3.0);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Calls `visit(s, w)` for every node of the composite rule on `[a, b]`.
pub fn for_each_node(
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    rule: &ReferenceRule,
    mut visit: impl FnMut(f64, f64),
) {
    if !(b > a) {
        return;
    }
    let panels = cfg.panels_for(b - a);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let left = a + p as f64 * h;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            visit(left + t * h, w * h);
        }
    }
}

/// Composite quadrature of `f` over `[a, b]`.
pub fn integrate(a: f64, b: f64, cfg: &QuadratureConfig, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = cfg.reference_rule();
    let mut acc = 0.0;
    for_each_node(a, b, cfg, &rule, |s, w| acc += w * f(s));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_weights_sum_to_one() {
        for n in 1..=40 {
            let r = ReferenceRule::gauss_legendre(n);
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 1.0).abs() < 1e-14, "n={n}: {sum}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
        let r = ReferenceRule::gauss_legendre(8);
        for deg in 0..16 {
            let got: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(x, w)| w * x.powi(deg))
                .sum();
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-15, "degree {deg}");
        }
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let r = ReferenceRule::simpson(5);
        assert_eq!(r.len(), 7);
        let got: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * x * x * x)
            .sum();
        assert!((got - 0.25).abs() < 1e-15);
    }

    #[test]
    fn composite_integration() {
        let cfg = QuadratureConfig::default();
        let v = integrate(0.0, PI, &cfg, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
        let simpson = QuadratureConfig {
            rule: QuadratureRule::Simpson,
            ..cfg
        };
        let v = integrate(0.0, PI, &simpson, f64::sin);
        assert!((v - 2.0).abs() < 1e-8);
        assert_eq!(integrate(1.0, 1.0, &cfg, |_| 1.0), 0.0);
    }

    #[test]
    fn coarsening_halves_panels_then_nodes() {
        let cfg = QuadratureConfig::default();
        assert_eq!(cfg.coarsened().panels_per_unit, 4);
        let one = QuadratureConfig {
            panels_per_unit: 1,
            ..cfg
        };
        assert_eq!(one.coarsened().nodes_per_panel, 8);
    }
}
