//! Spectral solution of the Fokker-Planck equation
//! `∂P/∂t = −∂x(D¹P) + ∂x²P`, `D¹ = 2W′`, on `(0, ∞)`.
//!
//! With `P = e^{W} ψ` the generator becomes `−H`, `H = −∂² + W′² + W″`, so
//! `P(x,t) = φ₀(x) Σ cₙ φₙ(x) e^{−λₙ t}` with `cₙ = ∫ φₙ P(x,0)/φ₀ dx`.

mod cn;
mod interp;

pub use cn::{fp_oracle_cn, log_slope, thomas, FpOperator};
pub use interp::MonotoneCubic;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_checked, tail_end, Quadrature};
use crate::polycore::{int, to_f64, ModelParams, Rational};
use crate::sqm::{
    eigensystem_deformed, prepotential_wl_deformed, radial_oscillator, EigenState, Hamiltonian,
    Prepotential, PrepotentialRecord, Sign, StructuredFn,
};

/// Tail criterion `|cₙ|/max|c|` for accepting a truncation.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Accuracy demanded of each `cₙ` (12 vs 24 Gauss nodes per panel).
pub const COEFF_ACCURACY: f64 = 1e-10;

/// Drift `D¹ = 2W′`, unit diffusion, with the bound eigenbasis of
/// `H = −∂² + W′² + W″`.
#[derive(Clone, Debug)]
pub struct FPModel {
    name: String,
    hamiltonian: Hamiltonian,
    modes: Vec<EigenState>,
    stationary: StructuredFn,
    /// Largest numerical support end over the modes.
    support: f64,
}

/// Binds eigenstates of `H` built from `w` to the Fokker-Planck problem.
///
/// `modes` must start with the zero mode `∝ e^{W}` and have strictly
/// increasing eigenvalues.
pub fn fp_from_prepotential(
    name: &str,
    w: Prepotential,
    modes: Vec<EigenState>,
) -> Result<FPModel> {
    if !w.ground_state_normalizable() {
        let d = w.describe();
        return Err(Error::NonNormalizable(format!(
            "stationary density e^(2W) with gaussian sign {} and power {}",
            d.gauss, d.power
        )));
    }
    let first = modes
        .first()
        .ok_or_else(|| Error::ParameterRange("no modes supplied".into()))?;
    if first.epsilon != int(0) {
        return Err(Error::ParameterRange(
            "first mode must have eigenvalue 0".into(),
        ));
    }
    match w.exp().proportionality(&first.wavefunction) {
        Some(k) if k > 0.0 => {}
        _ => {
            return Err(Error::ParameterRange(
                "first mode is not the zero mode e^W".into(),
            ))
        }
    }
    if modes.windows(2).any(|p| p[1].epsilon <= p[0].epsilon) {
        return Err(Error::ParameterRange(
            "mode eigenvalues must increase strictly".into(),
        ));
    }
    let phi0 = &first.wavefunction;
    let raw = w.exp_k(2);
    let end = phi0.support_end();
    let mass = integrate_checked(|x| raw.eval(x), end, 1e-13)?;
    let stationary = raw.scaled(1.0 / mass);
    let hamiltonian = Hamiltonian::new(w, Sign::Plus, int(0));
    let support = modes
        .par_iter()
        .map(|m| m.wavefunction.support_end())
        .reduce(|| 0.0, f64::max);
    Ok(FPModel {
        name: name.to_string(),
        hamiltonian,
        modes,
        stationary,
        support,
    })
}

/// Rayleigh process: `W₀ = −ωx²/2 + g ln x`, `λₙ = 4nω`.
pub fn rayleigh(g: &Rational, omega: f64, n_cap: usize) -> Result<FPModel> {
    let (h, states) = radial_oscillator(g, omega, n_cap)?;
    fp_from_prepotential("rayleigh", h.prepotential().clone(), states)
}

/// Deformed Rayleigh process built from `W_ℓ`, `λₙ = 4nω`.
pub fn deformed_rayleigh(params: &ModelParams, n_cap: usize) -> Result<FPModel> {
    let w = prepotential_wl_deformed(params)?;
    fp_from_prepotential("deformed-rayleigh", w, eigensystem_deformed(params, n_cap)?)
}

impl FPModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prepotential(&self) -> &Prepotential {
        self.hamiltonian.prepotential()
    }

    pub fn omega(&self) -> f64 {
        self.hamiltonian.omega()
    }

    pub fn modes(&self) -> &[EigenState] {
        &self.modes
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.energy).collect()
    }

    /// Normalized `P₀ = e^{2W}/∫e^{2W}`.
    pub fn stationary(&self) -> &StructuredFn {
        &self.stationary
    }

    /// Drift `D¹(x) = 2W′(x)`.
    pub fn drift(&self, x: f64) -> f64 {
        2.0 * self.prepotential().derivative_eval(x).unwrap_or(f64::NAN)
    }

    /// `W′² + W″` of the similarity-transformed operator.
    pub fn potential(&self, x: f64) -> Result<f64> {
        self.hamiltonian.potential_eval(x)
    }

    /// Right end where `P₀` has fallen below `1e-16` of its maximum.
    pub fn domain_end(&self) -> f64 {
        let step = 0.005 / self.omega().sqrt();
        tail_end(
            |x| self.stationary.ln_abs(x),
            step,
            16.0 * std::f64::consts::LN_10,
        )
    }

    pub fn describe(&self) -> ModelRecord {
        ModelRecord {
            name: self.name.clone(),
            omega: self.omega(),
            prepotential: self.prepotential().describe(),
            modes_available: self.modes.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelRecord {
    pub name: String,
    pub omega: f64,
    pub prepotential: PrepotentialRecord,
    pub modes_available: usize,
}

/// Initial density: a closed-form evaluable or grid samples joined by a
/// shape-preserving cubic.
pub enum InitialDensity {
    Closure(Box<dyn Fn(f64) -> f64 + Send + Sync>),
    Samples(MonotoneCubic),
}

impl InitialDensity {
    pub fn closure<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::Closure(Box::new(f))
    }

    pub fn from_samples(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if let Some(v) = p.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::ParameterRange(format!(
                "initial samples must be finite and non-negative, got {v}"
            )));
        }
        Ok(Self::Samples(MonotoneCubic::new(x, p)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Closure(f) => f(x),
            Self::Samples(m) => m.eval(x),
        }
    }
}

/// `P(x,0) ∝ φ₀(x) x^b e^{−η}` with `b` the origin exponent of `φ₀`; for
/// `W_ℓ` this is `x^{2(g+ℓ)} e^{−3η/2} ξ_ℓ(η; g+1)/ξ_ℓ(η; g)`. Narrower
/// than `P₀` with the same behaviour at the origin. Unit mass.
pub fn bump_initial(model: &FPModel) -> Result<InitialDensity> {
    let phi0 = model.modes[0].wavefunction.clone();
    let (omega, b) = (model.omega(), to_f64(phi0.power()));
    let end = phi0.support_end();
    let shape = move |x: f64| phi0.eval(x) * (b * x.ln() - omega * x * x).exp();
    let mass = integrate_checked(&shape, end, 1e-13)?;
    Ok(InitialDensity::closure(move |x| shape(x) / mass))
}

/// Expansion coefficients and the truncation they justify.
#[derive(Clone, Debug)]
pub struct FPSolution<'m> {
    pub model: &'m FPModel,
    pub coefficients: Vec<f64>,
    /// `|c_{n_max}| / max|c|` at the accepted truncation.
    pub tail_ratio: f64,
}

/// `cₙ = ∫ φₙ P(x,0)/φ₀ dx` for `n ≤ n_max`, where `n_max` is the first
/// index at which two consecutive coefficients fall below
/// [`TAIL_TOLERANCE`] relative to the largest.
pub fn fp_expand<'m>(model: &'m FPModel, initial: &InitialDensity) -> Result<FPSolution<'m>> {
    fp_expand_with(model, initial, COEFF_ACCURACY)
}

/// [`fp_expand`] with an explicit per-coefficient quadrature tolerance
/// (interpolated samples are only `C¹`, so node doubling converges slower).
pub fn fp_expand_with<'m>(
    model: &'m FPModel,
    initial: &InitialDensity,
    accuracy: f64,
) -> Result<FPSolution<'m>> {
    let modes = &model.modes;
    let end = model.support;
    let phi0 = &modes[0].wavefunction;
    let ratio = |x: f64| -> Result<f64> {
        let (p, f0) = (initial.eval(x), phi0.eval(x));
        if p == 0.0 {
            return Ok(0.0);
        }
        let r = p / f0;
        if !r.is_finite() {
            return Err(Error::NonFinite(format!(
                "P(x,0)/phi_0 unbounded at x = {x}"
            )));
        }
        Ok(r)
    };
    let (coarse, fine) = (
        Quadrature::half_line(end, 12),
        Quadrature::half_line(end, 24),
    );
    let table =
        |q: &Quadrature| -> Result<Vec<f64>> { q.nodes().par_iter().map(|&x| ratio(x)).collect() };
    let (rc, rf) = (table(&coarse)?, table(&fine)?);
    let coeffs: Vec<f64> = modes
        .par_iter()
        .map(|m| {
            let f = &m.wavefunction;
            let proj = |q: &Quadrature, r: &[f64]| {
                q.nodes()
                    .iter()
                    .zip(q.weights())
                    .zip(r)
                    .map(|((&x, &w), &v)| w * f.eval(x) * v)
                    .sum::<f64>()
            };
            let (a, b) = (proj(&coarse, &rc), proj(&fine, &rf));
            if !b.is_finite() {
                return Err(Error::NonFinite(format!("coefficient c_{}", m.n)));
            }
            if (a - b).abs() > accuracy {
                return Err(Error::QuadratureNonConvergence {
                    estimate: (a - b).abs(),
                    tolerance: accuracy,
                });
            }
            Ok(b)
        })
        .collect::<Result<_>>()?;
    let (n_max, tail_ratio) = truncation(&coeffs)?;
    Ok(FPSolution {
        model,
        coefficients: coeffs[..=n_max].to_vec(),
        tail_ratio,
    })
}

fn truncation(c: &[f64]) -> Result<(usize, f64)> {
    let big = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 {
        return Err(Error::ParameterRange(
            "initial density has zero projection".into(),
        ));
    }
    let rel: Vec<f64> = c.iter().map(|v| v.abs() / big).collect();
    for n in 1..rel.len().saturating_sub(1) {
        if rel[n] < TAIL_TOLERANCE && rel[n + 1] < TAIL_TOLERANCE {
            return Ok((n, rel[n]));
        }
    }
    Err(Error::TruncationTail {
        ratio: *rel.last().unwrap_or(&1.0),
        tolerance: TAIL_TOLERANCE,
    })
}

impl FPSolution<'_> {
    pub fn n_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.model.modes[..self.coefficients.len()]
            .iter()
            .map(|m| m.energy)
            .collect()
    }

    /// `P(x,t)`.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let modes = &self.model.modes;
        let s: f64 = self
            .coefficients
            .iter()
            .zip(modes)
            .map(|(c, m)| c * m.wavefunction.eval(x) * (-m.energy * t).exp())
            .sum();
        modes[0].wavefunction.eval(x) * s
    }

    /// `∫ P(x,t) dx` by quadrature.
    pub fn mass(&self, t: f64) -> Result<f64> {
        integrate_checked(|x| self.eval(x, t), self.model.support, 1e-11)
    }

    /// `∫|P(x,t) − q(x)| dx` against another density.
    pub fn l1_to<F: Fn(f64) -> f64>(&self, t: f64, q: F) -> f64 {
        Quadrature::half_line(self.model.support, 24).integrate(|x| (self.eval(x, t) - q(x)).abs())
    }
}

/// Density samples at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridDensity {
    pub t: f64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl GridDensity {
    /// Trapezoid mass (cell sum on uniform cell-centred grids is the
    /// midpoint rule; this is the general form).
    pub fn trapezoid_mass(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.p.windows(2))
            .map(|(x, p)| 0.5 * (x[1] - x[0]) * (p[0] + p[1]))
            .sum()
    }

    pub fn min(&self) -> f64 {
        self.p.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// `Σ|Pᵢ − Qᵢ| h` on a shared uniform grid of spacing `h`.
    pub fn l1_distance(&self, other: &GridDensity, h: f64) -> f64 {
        assert_eq!(self.x.len(), other.x.len());
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * h
    }
}

/// Evaluates the spectral sum on `grid`.
pub fn fp_evolve(solution: &FPSolution, t: f64, grid: &[f64]) -> Result<GridDensity> {
    if !(t >= 0.0) {
        return Err(Error::ParameterRange(format!("t must be >= 0, got {t}")));
    }
    let p = grid.par_iter().map(|&x| solution.eval(x, t)).collect();
    Ok(GridDensity {
        t,
        x: grid.to_vec(),
        p,
    })
}

/// One spectral-vs-oracle comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub t: f64,
    #[serde(rename = "L1_distance")]
    pub l1_distance: f64,
}

/// Settings of the Crank-Nicolson cross-check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OracleConfig {
    pub cells: usize,
    pub dt: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cells: 2000,
            dt: 1e-3,
        }
    }
}

/// Builds the oracle operator on `(0, L)` with `L` from [`FPModel::domain_end`].
pub fn oracle_operator(model: &FPModel, cells: usize) -> Result<FpOperator> {
    FpOperator::new(|x| model.drift(x), model.domain_end(), cells)
}

/// Runs the oracle from the initial density and compares with the spectral
/// solution at each of `times` (ascending).
pub fn compare_with_oracle(
    solution: &FPSolution,
    initial: &InitialDensity,
    times: &[f64],
    cfg: OracleConfig,
) -> Result<(Vec<Comparison>, Vec<GridDensity>, Vec<GridDensity>)> {
    let op = oracle_operator(solution.model, cfg.cells)?;
    let mut p: Vec<f64> = op.x.iter().map(|&x| initial.eval(x)).collect();
    let (mut now, mut out, mut spec, mut cn) = (0.0, Vec::new(), Vec::new(), Vec::new());
    for &t in times {
        if t > now {
            p = op.evolve(&p, t - now, cfg.dt, |_, _| {})?;
            now = t;
        }
        let s = fp_evolve(solution, t, &op.x)?;
        let c = GridDensity {
            t,
            x: op.x.clone(),
            p: p.clone(),
        };
        out.push(Comparison {
            t,
            l1_distance: s.l1_distance(&c, op.h),
        });
        spec.push(s);
        cn.push(c);
    }
    Ok((out, spec, cn))
}

/// Slowest decay rate of the oracle: slope of `ln Σ|P(t) − P_stat| h` over
/// `t ∈ [t0, t1]`, with `P_stat` the discrete stationary state.
pub fn oracle_decay_rate(
    model: &FPModel,
    initial: &InitialDensity,
    t0: f64,
    t1: f64,
    cfg: OracleConfig,
) -> Result<f64> {
    let op = oracle_operator(model, cfg.cells)?;
    let st = op.discrete_stationary();
    let p0: Vec<f64> = op.x.iter().map(|&x| initial.eval(x)).collect();
    // compare like with like: rescale to the discrete mass of the stationary state
    let m = op.mass(&p0);
    let p0: Vec<f64> = p0.iter().map(|v| v / m).collect();
    let (mut ts, mut ds) = (Vec::new(), Vec::new());
    op.evolve(&p0, t1, cfg.dt, |t, p| {
        if t >= t0 - 1e-12 {
            ts.push(t);
            ds.push(p.iter().zip(&st).map(|(a, b)| (a - b).abs()).sum::<f64>() * op.h);
        }
    })?;
    Ok(-log_slope(&ts, &ds))
}

/// `sup|A P₀|` of the oracle operator applied to the closed-form `P₀`.
pub fn stationary_residual(model: &FPModel, cells: usize) -> Result<f64> {
    let op = oracle_operator(model, cells)?;
    let p0: Vec<f64> = op.x.iter().map(|&x| model.stationary.eval(x)).collect();
    Ok(op.apply(&p0).iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// `{model, c_n, lambda_n, comparisons}`.
#[derive(Clone, Debug, Serialize)]
pub struct FpReport {
    pub model: ModelRecord,
    pub c_n: Vec<f64>,
    pub lambda_n: Vec<f64>,
    pub tail_ratio: f64,
    pub oracle: OracleConfig,
    pub comparisons: Vec<Comparison>,
}

impl FpReport {
    pub fn new(solution: &FPSolution, oracle: OracleConfig, comparisons: Vec<Comparison>) -> Self {
        Self {
            model: solution.model.describe(),
            c_n: solution.coefficients.clone(),
            lambda_n: solution.lambdas(),
            tail_ratio: solution.tail_ratio,
            oracle,
            comparisons,
        }
    }
}

/// `t,x,P` rows for a sequence of snapshots.
pub fn density_csv(snapshots: &[GridDensity]) -> String {
    let mut s = String::from("t,x,P\n");
    for g in snapshots {
        for (x, p) in g.x.iter().zip(&g.p) {
            s.push_str(&format!("{},{},{:e}\n", g.t, x, p));
        }
    }
    s
}

/// Eigenvalue of mode `n` in units of `ω`.
pub fn lambda_units(model: &FPModel, n: usize) -> f64 {
    to_f64(&model.modes[n].epsilon)
}
