//! Crank-Nicolson finite-volume solver for `∂P/∂t = −∂x(D¹P) + ∂x²P`,
//! used as an independent check of the spectral solution.
//!
//! Cell-centred grid on `(0, L)` with zero flux through both ends. The face
//! flux is the exponentially fitted form
//! `J_{i+1/2} = (e^{δ_i} P_i − e^{−δ_i} P_{i+1}) / h`, `δ_i = ∫ D¹/2 dx`
//! across the face, which conserves mass exactly and keeps `e^{∫D¹}` as
//! the discrete stationary state.

use crate::error::{Error, Result};
use crate::numerics::quadrature::Quadrature;

use super::GridDensity;

#[derive(Clone, Debug)]
pub struct FpOperator {
    /// Cell centres.
    pub x: Vec<f64>,
    pub h: f64,
    /// `e^{δ_i}` and `e^{−δ_i}` per interior face.
    up: Vec<f64>,
    down: Vec<f64>,
    delta: Vec<f64>,
}

impl FpOperator {
    /// Builds the operator for drift `D¹` on `n` cells of `(0, length)`.
    /// `δ_i` uses an 8-point Gauss-Legendre rule per face interval.
    pub fn new<D: Fn(f64) -> f64>(drift: D, length: f64, n: usize) -> Result<Self> {
        let h = length / n as f64;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        let rule = Quadrature::from_breakpoints(&[0.0, 1.0], 8, 1e-15);
        let mut delta = Vec::with_capacity(n - 1);
        for &a in &x[..n - 1] {
            let d: f64 = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .map(|(t, w)| w * 0.5 * drift(a + t * h))
                .sum::<f64>()
                * h;
            if !d.is_finite() {
                return Err(Error::NonFinite(format!(
                    "drift integral across face at x = {}",
                    a + 0.5 * h
                )));
            }
            delta.push(d);
        }
        let up = delta.iter().map(|d| d.exp()).collect();
        let down = delta.iter().map(|d| (-d).exp()).collect();
        Ok(Self {
            x,
            h,
            up,
            down,
            delta,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Tridiagonal `(lower, diag, upper)` of `dP/dt = A P`.
    fn bands(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.len();
        let k = 1.0 / (self.h * self.h);
        let mut lo = vec![0.0; n];
        let mut di = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for i in 0..n {
            if i + 1 < n {
                di[i] -= k * self.up[i];
                hi[i] = k * self.down[i];
            }
            if i > 0 {
                di[i] -= k * self.down[i - 1];
                lo[i] = k * self.up[i - 1];
            }
        }
        (lo, di, hi)
    }

    /// `A P` for samples at the cell centres.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let (lo, di, hi) = self.bands();
        (0..p.len())
            .map(|i| {
                let mut v = di[i] * p[i];
                if i > 0 {
                    v += lo[i] * p[i - 1];
                }
                if i + 1 < p.len() {
                    v += hi[i] * p[i + 1];
                }
                v
            })
            .collect()
    }

    /// Discrete stationary state `∝ exp(Σ 2δ)`, unit discrete mass.
    pub fn discrete_stationary(&self) -> Vec<f64> {
        let mut lw = vec![0.0; self.len()];
        for i in 1..self.len() {
            lw[i] = lw[i - 1] + 2.0 * self.delta[i - 1];
        }
        let m = lw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let p: Vec<f64> = lw.iter().map(|v| (v - m).exp()).collect();
        let mass: f64 = p.iter().sum::<f64>() * self.h;
        p.into_iter().map(|v| v / mass).collect()
    }

    pub fn mass(&self, p: &[f64]) -> f64 {
        p.iter().sum::<f64>() * self.h
    }

    /// Integrates from `p0` to time `t` with steps of at most `dt`, calling
    /// `observe(t_k, P_k)` after every step.
    pub fn evolve<F: FnMut(f64, &[f64])>(
        &self,
        p0: &[f64],
        t: f64,
        dt: f64,
        mut observe: F,
    ) -> Result<Vec<f64>> {
        let steps = (t / dt).ceil().max(1.0) as usize;
        let tau = t / steps as f64;
        let (lo, di, hi) = self.bands();
        let n = self.len();
        // (I − τ/2 A) P^{k+1} = (I + τ/2 A) P^k
        let (al, ad, ah): (Vec<f64>, Vec<f64>, Vec<f64>) = (
            lo.iter().map(|v| -0.5 * tau * v).collect(),
            di.iter().map(|v| 1.0 - 0.5 * tau * v).collect(),
            hi.iter().map(|v| -0.5 * tau * v).collect(),
        );
        let mut p = p0.to_vec();
        let mut rhs = vec![0.0; n];
        for k in 0..steps {
            for i in 0..n {
                let mut v = p[i] + 0.5 * tau * di[i] * p[i];
                if i > 0 {
                    v += 0.5 * tau * lo[i] * p[i - 1];
                }
                if i + 1 < n {
                    v += 0.5 * tau * hi[i] * p[i + 1];
                }
                rhs[i] = v;
            }
            p = thomas(&al, &ad, &ah, &rhs);
            if let Some(i) = p.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!(
                    "Crank-Nicolson step {k}: P[{i}] at x = {}",
                    self.x[i]
                )));
            }
            observe((k + 1) as f64 * tau, &p);
        }
        Ok(p)
    }
}

/// Solves a tridiagonal system (`lo[0]` and `hi[n-1]` unused).
pub fn thomas(lo: &[f64], di: &[f64], hi: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = di.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = hi[0] / di[0];
    d[0] = rhs[0] / di[0];
    for i in 1..n {
        let m = di[i] - lo[i] * c[i - 1];
        c[i] = if i + 1 < n { hi[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lo[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Crank-Nicolson solution at time `t` from grid samples `p0` on the
/// operator's cell centres.
pub fn fp_oracle_cn(op: &FpOperator, p0: &[f64], t: f64, dt: f64) -> Result<GridDensity> {
    let p = op.evolve(p0, t, dt, |_, _| {})?;
    Ok(GridDensity {
        t,
        x: op.x.clone(),
        p,
    })
}

/// Least-squares slope of `ln y` against `t`.
pub fn log_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (mt, my) = (t.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in t.iter().zip(&ly) {
        sxy += (a - mt) * (b - my);
        sxx += (a - mt) * (a - mt);
    }
    sxy / sxx
}
