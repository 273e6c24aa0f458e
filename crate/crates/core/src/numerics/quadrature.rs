use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Nodes and weights on `(0, end]` with a declared target accuracy.
#[derive(Clone, Debug)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    accuracy: f64,
}

/// Default relative accuracy claimed by [`Quadrature::half_line`].
pub const DEFAULT_ACCURACY: f64 = 1e-13;

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n.try_into().expect("at least one node"));
    let mut v: Vec<(f64, f64)> = rule.into_node_weight_pairs().into_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

impl Quadrature {
    /// Plain Gauss-Legendre rule with `n_nodes` nodes mapped to `(0, end]`.
    pub fn gauss_legendre(end: f64, n_nodes: usize) -> Self {
        Self::from_breakpoints(&[0.0, end], n_nodes, DEFAULT_ACCURACY)
    }

    /// Composite Gauss-Legendre on `(0, end]`: geometrically graded panels
    /// toward the origin (to resolve `x^p` endpoint behaviour) followed by
    /// uniform panels.
    pub fn half_line(end: f64, nodes_per_panel: usize) -> Self {
        let knee = end / 32.0;
        let mut bp = vec![0.0];
        bp.extend((1..=24).rev().map(|j| knee * 0.5f64.powi(j)));
        bp.extend((0..=48).map(|i| knee + (end - knee) * i as f64 / 48.0));
        Self::from_breakpoints(&bp, nodes_per_panel, DEFAULT_ACCURACY)
    }

    pub fn from_breakpoints(bp: &[f64], nodes_per_panel: usize, accuracy: f64) -> Self {
        let rule = legendre_rule(nodes_per_panel);
        let mut nodes = Vec::with_capacity(rule.len() * bp.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in bp.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for &(t, wt) in &rule {
                nodes.push(mid + half * t);
                weights.push(half * wt);
            }
        }
        Self {
            nodes,
            weights,
            accuracy,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integrates several functions sampled once per node.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// Integral over `(0, end]` checked by doubling the nodes per panel.
///
/// Returns the finer value; fails when the two estimates differ by more than
/// `accuracy · max(1, |value|)`.
pub fn integrate_checked<F: Fn(f64) -> f64>(f: F, end: f64, accuracy: f64) -> Result<f64> {
    let coarse = Quadrature::half_line(end, 12).integrate(&f);
    let fine = Quadrature::half_line(end, 24).integrate(&f);
    let est = (fine - coarse).abs();
    if !fine.is_finite() {
        return Err(Error::NonFinite("quadrature sum".into()));
    }
    if est > accuracy * fine.abs().max(1.0) {
        return Err(Error::QuadratureNonConvergence {
            estimate: est,
            tolerance: accuracy,
        });
    }
    Ok(fine)
}

/// Right end beyond which a gaussian-type integrand is negligible: the
/// first `x` past the maximum of `ln|f|` after which `ln|f|` has stayed
/// below `max − drop` for 32 consecutive steps (isolated nodes of `f` do
/// not end the scan).
pub fn tail_end<F: Fn(f64) -> f64>(ln_abs: F, step: f64, drop: f64) -> f64 {
    const HOLD: usize = 32;
    let mut best = f64::NEG_INFINITY;
    let mut below = 0usize;
    let mut first_below = step;
    let mut x = step;
    while x <= 1e5 * step {
        let v = ln_abs(x);
        if v > best {
            best = v;
        }
        if best.is_finite() && !(v >= best - drop) {
            if below == 0 {
                first_below = x;
            }
            below += 1;
            if below >= HOLD {
                return first_below;
            }
        } else {
            below = 0;
        }
        x += step;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_half_integral() {
        let v = integrate_checked(|x| (-x * x).exp(), 9.0, 1e-13).unwrap();
        assert!((v - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn second_moment() {
        let v = integrate_checked(|x| x * x * (-x * x).exp(), 9.0, 1e-13).unwrap();
        assert!((v - PI.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn weights_are_positive() {
        let q = Quadrature::half_line(5.0, 16);
        assert!(q.weights().iter().all(|&w| w > 0.0));
        assert!((q.integrate(|_| 1.0) - 5.0).abs() < 1e-13);
        let plain = Quadrature::gauss_legendre(2.0, 10);
        assert!((plain.integrate(|x| x.powi(19)) - 2f64.powi(20) / 20.0).abs() < 1e-8);
    }

    #[test]
    fn graded_panels_resolve_fractional_powers() {
        // ∫_0^1 x^{1/3} dx = 3/4 despite the endpoint singularity of the derivative
        let v = Quadrature::half_line(1.0, 16).integrate(|x| x.cbrt());
        assert!((v - 0.75).abs() < 1e-12, "{v}");
    }

    #[test]
    fn non_convergence_is_reported() {
        // wildly oscillating integrand cannot be resolved by 12 vs 24 nodes per panel
        let r = integrate_checked(|x| (400.0 * x * x).sin(), 10.0, 1e-13);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn tail_end_skips_nodes() {
        // ln|(x − 2) e^{−x²}| plunges at the node x = 2
        let end = tail_end(|x| ((x - 2.0).abs()).ln() - x * x, 0.5, 42.0);
        assert!(end > 6.0, "{end}");
    }

    #[test]
    fn tail_end_of_gaussian() {
        let end = tail_end(|x| -x * x, 0.05, 42.0);
        assert!(end > 6.4 && end < 6.6, "{end}");
    }
}
