use rayon::prelude::*;
use serde::Serialize;

use super::hamiltonian::{susy_apply, Hamiltonian, Sign};
use super::prepotential::{
    prepotential_w0, prepotential_wl_dc, prepotential_wl_deformed, Prepotential,
};
use super::ratfn::RatFn;
use super::structured::{StructuredFn, WavefunctionRecord};
use crate::error::{Error, Result};
use crate::numerics::fd::FdConfig;
use crate::numerics::quadrature::Quadrature;
use crate::polycore::{
    deforming_xi, deforming_xi_pair, exceptional_p, half, int, laguerre, rat, to_f64, Family,
    ModelParams, Rational,
};

/// Closed-form state of a Hamiltonian. `epsilon` is the energy in units
/// of `ω`, kept exact.
#[derive(Clone, Debug)]
pub struct EigenState {
    pub n: usize,
    pub epsilon: Rational,
    pub energy: f64,
    pub wavefunction: StructuredFn,
}

impl EigenState {
    pub fn new(n: usize, epsilon: Rational, wavefunction: StructuredFn) -> Self {
        let energy = to_f64(&epsilon) * wavefunction.omega();
        Self {
            n,
            epsilon,
            energy,
            wavefunction,
        }
    }

    /// Negative control: the constant coefficient of `N` shifted by
    /// `delta · max|coeff(N)|`.
    pub fn perturbed(&self, delta: f64) -> Self {
        let f = &self.wavefunction;
        let num = f.ratio().num();
        let bump = crate::polycore::f64_to_rational(delta * num.max_abs_coeff());
        let mut coeffs = num.coeffs().to_vec();
        if coeffs.is_empty() {
            coeffs.push(Rational::from_integer(0.into()));
        }
        coeffs[0] += bump;
        let r = RatFn::new(
            crate::polycore::PolyQ::from_coeffs(coeffs),
            f.ratio().den().clone(),
        );
        let wf = StructuredFn::new(f.c(), f.a(), f.power().clone(), r, f.omega());
        Self {
            wavefunction: wf,
            ..self.clone()
        }
    }

    pub fn to_record(&self) -> StateRecord {
        StateRecord {
            n: self.n,
            energy: self.energy,
            wavefunction: self.wavefunction.to_record(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StateRecord {
    pub n: usize,
    pub energy: f64,
    pub wavefunction: WavefunctionRecord,
}

/// `{params, states}` export of an eigensystem.
#[derive(Clone, Debug, Serialize)]
pub struct EigenSystemReport {
    pub params: ModelParams,
    pub states: Vec<StateRecord>,
}

impl EigenSystemReport {
    pub fn new(params: &ModelParams, states: &[EigenState]) -> Self {
        Self {
            params: params.clone(),
            states: states.iter().map(EigenState::to_record).collect(),
        }
    }
}

fn normalized_states(raw: Vec<(usize, Rational, StructuredFn)>) -> Result<Vec<EigenState>> {
    raw.into_par_iter()
        .map(|(n, e, f)| Ok(EigenState::new(n, e, f.normalized()?)))
        .collect()
}

/// `H_ℓ^{(+)}`: the deformed oscillator built from `W_ℓ`.
pub fn hamiltonian_deformed(params: &ModelParams) -> Result<Hamiltonian> {
    Ok(Hamiltonian::new(
        prepotential_wl_deformed(params)?,
        Sign::Plus,
        int(0),
    ))
}

/// Radial oscillator `H_0^{(+)}(g)`: `E_n = 4nω`,
/// `φ_n = e^{−η/2} x^g L_n^{(g−1/2)}(η)`.
pub fn radial_oscillator(
    g: &Rational,
    omega: f64,
    n_max: usize,
) -> Result<(Hamiltonian, Vec<EigenState>)> {
    let h = Hamiltonian::new(prepotential_w0(g, omega)?, Sign::Plus, int(0));
    let alpha = g - half();
    let raw = (0..=n_max)
        .map(|n| {
            let r = RatFn::from_poly(laguerre(n, &alpha));
            (
                n,
                int(4 * n as i64),
                StructuredFn::new(1.0, 1, g.clone(), r, omega),
            )
        })
        .collect();
    Ok((h, normalized_states(raw)?))
}

/// Deformed oscillator states `ψ_{ℓ,n} = e^{−η/2} x^{g+ℓ} P_{ℓ,n}/ξ_ℓ(η; g)`
/// with `E = 4nω`, `n = 0..=n_max`.
pub fn eigensystem_deformed(params: &ModelParams, n_max: usize) -> Result<Vec<EigenState>> {
    let raw = deformed_raw(params, n_max)?;
    normalized_states(raw)
}

fn deformed_raw(
    params: &ModelParams,
    n_max: usize,
) -> Result<Vec<(usize, Rational, StructuredFn)>> {
    prepotential_wl_deformed(params)?;
    let xi = deforming_xi(params)?;
    let p = &params.g + int(params.ell as i64);
    (0..=n_max)
        .map(|n| {
            let r = RatFn::new(exceptional_p(params, n)?, xi.clone());
            Ok((
                n,
                int(4 * n as i64),
                StructuredFn::new(1.0, 1, p.clone(), r, params.omega),
            ))
        })
        .collect()
}

/// Energy of the `n`-th Darboux-Crum plus-side state, in units of `ω`:
/// L1 `4(n+g+2ℓ−1/2)`, L2 `4(n+g+1/2)`.
pub fn dc_energy(params: &ModelParams, n: usize) -> Rational {
    let (g, l, n) = (&params.g, int(params.ell as i64), int(n as i64));
    match params.family {
        Family::L1 => int(4) * (n + g + int(2) * l - half()),
        Family::L2 => int(4) * (n + g + half()),
    }
}

/// Reference oscillator and constant with `𝓗^{(+)} = H_0^{(+)}(g′) + c·ω`:
/// L1 `g′ = g+ℓ−1`, `c = 2(2g+4ℓ−1)`; L2 `g′ = g+ℓ+1`, `c = 2(2g+1)`.
pub fn dc_reference(params: &ModelParams) -> Result<(Prepotential, Rational)> {
    let (g, l) = (&params.g, int(params.ell as i64));
    let (gp, c) = match params.family {
        Family::L1 => (
            g + &l - int(1),
            int(2) * (int(2) * g + int(4) * &l - int(1)),
        ),
        Family::L2 => (g + &l + int(1), int(2) * (int(2) * g + int(1))),
    };
    Ok((prepotential_w0(&gp, params.omega)?, c))
}

/// `(H_ℓ^{(−)}(g), H_ℓ^{(+)}(g+1) + 4ω)`: identical when the deformed
/// system is shape invariant.
pub fn shape_invariance_pair(params: &ModelParams) -> Result<(Hamiltonian, Hamiltonian)> {
    let w = prepotential_wl_deformed(params)?;
    let w1 = prepotential_wl_deformed(&params.with_g(&params.g + int(1))?)?;
    Ok((
        Hamiltonian::new(w, Sign::Minus, int(0)),
        Hamiltonian::new(w1, Sign::Plus, int(4)),
    ))
}

/// `max |V_{𝓗^{(+)}}(x) − V_{H_0^{(+)}(g′)}(x) − cω|` over `grid`, both
/// potentials evaluated independently in floating point.
pub fn dc_identity_pointwise(params: &ModelParams, grid: &[f64]) -> Result<f64> {
    let (plus, _) = dc_hamiltonians(params)?;
    let (w0, c) = dc_reference(params)?;
    let reference = Hamiltonian::new(w0, Sign::Plus, int(0));
    let shift = to_f64(&c) * params.omega;
    grid.iter().try_fold(0.0f64, |m, &x| {
        let d = plus.potential_eval(x)? - reference.potential_eval(x)? - shift;
        Ok(m.max(d.abs()))
    })
}

/// Smallest origin exponent `p` (`ψ ~ x^p`) among `states`. The
/// finite-difference oracle is second order only for `p ≥ 1`.
pub fn fd_origin_power(states: &[EigenState]) -> f64 {
    states
        .iter()
        .map(|s| to_f64(s.wavefunction.power()))
        .fold(f64::INFINITY, f64::min)
}

/// Finite-difference box for a set of states: the right end is the widest
/// numerical support, the left end the point where the ground state has
/// fallen to `1e-14` of its maximum for the smallest exponent (`ψ ~ x^p` at the origin).
pub fn fd_config_for(states: &[EigenState], n: usize) -> FdConfig {
    let x_max = states
        .iter()
        .map(|s| s.wavefunction.support_end())
        .fold(0.0, f64::max);
    let p = fd_origin_power(states).max(0.5);
    let x_min = 1e-14f64.powf(1.0 / p) / states[0].wavefunction.omega().sqrt();
    FdConfig::new(n, x_min, x_max)
}

/// `(𝓗^{(+)}, 𝓗^{(−)})` from the Darboux-Crum prepotential, no offsets.
pub fn dc_hamiltonians(params: &ModelParams) -> Result<(Hamiltonian, Hamiltonian)> {
    let w = prepotential_wl_dc(params)?;
    Ok((
        Hamiltonian::new(w.clone(), Sign::Plus, int(0)),
        Hamiltonian::new(w, Sign::Minus, int(0)),
    ))
}

/// Constants relating the partner states.
#[derive(Clone, Debug, Serialize)]
pub struct PartnerConstant {
    pub n: usize,
    /// `𝒜⁺φ⁺_n = κ φ_{ℓ,n}` for the unnormalized closed forms.
    pub kappa: f64,
    /// `‖𝒜⁺φ⁺_n‖` for unit-norm `φ⁺_n`; equals `√E_n`.
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct DcPair {
    pub plus: Vec<EigenState>,
    pub minus: Vec<EigenState>,
    pub constants: Vec<PartnerConstant>,
}

/// Darboux-Crum pair. Plus side:
/// L1 `e^{−η/2} x^{g+ℓ−1} L_n^{(g+ℓ−3/2)}`, L2 `e^{−η/2} x^{g+ℓ+1} L_n^{(g+ℓ+1/2)}`;
/// minus side `𝒜⁺φ⁺_n`, normalized. Both sides share the energies.
pub fn eigensystem_dc_pair(params: &ModelParams, n_max: usize) -> Result<DcPair> {
    let w = prepotential_wl_dc(params)?;
    // the minus side lives on the deformed oscillator, which needs both ξ
    deforming_xi_pair(params)?;
    let gl = &params.g + int(params.ell as i64);
    let (power, alpha) = match params.family {
        Family::L1 => (&gl - int(1), &gl - rat(3, 2)),
        Family::L2 => (&gl + int(1), &gl + half()),
    };
    let deformed = deformed_raw(params, n_max)?;
    let rows: Vec<Result<(EigenState, EigenState, PartnerConstant)>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let e = dc_energy(params, n);
            let raw = StructuredFn::new(
                1.0,
                1,
                power.clone(),
                RatFn::from_poly(laguerre(n, &alpha)),
                params.omega,
            );
            let kappa = susy_apply(Sign::Plus, &w, &raw)
                .proportionality(&deformed[n].2)
                .ok_or_else(|| {
                    Error::NonFinite(format!("partner state n = {n} is not proportional"))
                })?;
            let plus = raw.normalized()?;
            let image = susy_apply(Sign::Plus, &w, &plus);
            let norm = image.norm_sq()?.sqrt();
            let minus = image.normalized()?;
            Ok((
                EigenState::new(n, e.clone(), plus),
                EigenState::new(n, e, minus),
                PartnerConstant { n, kappa, norm },
            ))
        })
        .collect();
    let mut pair = DcPair {
        plus: vec![],
        minus: vec![],
        constants: vec![],
    };
    for r in rows {
        let (p, m, c) = r?;
        pair.plus.push(p);
        pair.minus.push(m);
        pair.constants.push(c);
    }
    Ok(pair)
}

/// Quadrature adapted to a set of states: right end at the widest support.
pub fn state_quadrature(states: &[EigenState]) -> Quadrature {
    let end = states
        .iter()
        .map(|s| s.wavefunction.support_end())
        .fold(0.0, f64::max);
    Quadrature::half_line(end, 24)
}

/// `G_{mn} = ∫_0^∞ ψ_m ψ_n dx`.
pub fn gram_matrix(states: &[EigenState]) -> Vec<Vec<f64>> {
    let q = state_quadrature(states);
    let samples: Vec<Vec<f64>> = states
        .par_iter()
        .map(|s| q.nodes().iter().map(|&x| s.wavefunction.eval(x)).collect())
        .collect();
    (0..states.len())
        .map(|i| {
            (0..states.len())
                .map(|j| {
                    let prod: Vec<f64> = samples[i]
                        .iter()
                        .zip(&samples[j])
                        .map(|(a, b)| a * b)
                        .collect();
                    q.integrate_values(&prod)
                })
                .collect()
        })
        .collect()
}

/// `(max |G_mn|, m ≠ n; max |G_nn − 1|)`.
pub fn gram_defects(g: &[Vec<f64>]) -> (f64, f64) {
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                diag = diag.max((v - 1.0).abs());
            } else {
                off = off.max(v.abs());
            }
        }
    }
    (off, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::log_linear;
    use crate::polycore::parse_rational;

    fn params(f: Family, ell: u32, g: &str) -> ModelParams {
        ModelParams::new(f, ell, parse_rational(g).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn deformed_shape_invariance() {
        for fam in [Family::L1, Family::L2] {
            for ell in 1..=3 {
                let (minus, plus) = shape_invariance_pair(&params(fam, ell, "3/2")).unwrap();
                assert_eq!(minus.potential_u(), plus.potential_u());
            }
        }
    }

    #[test]
    fn deformed_spectrum_is_oscillator_spectrum() {
        let s = eigensystem_deformed(&params(Family::L2, 2, "3/2"), 4).unwrap();
        let e: Vec<f64> = s.iter().map(|s| s.energy).collect();
        assert_eq!(e, vec![0.0, 4.0, 8.0, 12.0, 16.0]);
    }

    #[test]
    fn ground_state_is_exp_w() {
        let p = params(Family::L1, 2, "1");
        let s = eigensystem_deformed(&p, 0).unwrap();
        let w = prepotential_wl_deformed(&p).unwrap();
        assert!(s[0].wavefunction.proportionality(&w.exp()).is_some());
    }

    #[test]
    fn undeformed_limit_reproduces_oscillator_records() {
        let s = eigensystem_deformed(&params(Family::L1, 0, "3/2"), 5).unwrap();
        let (_, o) = radial_oscillator(&rat(3, 2), 1.0, 5).unwrap();
        for (a, b) in s.iter().zip(&o) {
            assert_eq!(a.to_record().wavefunction, b.to_record().wavefunction);
        }
    }

    #[test]
    fn dc_energies() {
        assert_eq!(dc_energy(&params(Family::L1, 1, "1"), 0), int(10));
        assert_eq!(dc_energy(&params(Family::L2, 1, "1"), 0), int(6));
    }

    #[test]
    fn dc_potential_identity_is_exact() {
        for fam in [Family::L1, Family::L2] {
            for g in ["1", "3/2", "5/2"] {
                let p = params(fam, 2, g);
                let (plus, _) = dc_hamiltonians(&p).unwrap();
                let (w0, c) = dc_reference(&p).unwrap();
                let reference = Hamiltonian::new(w0, Sign::Plus, c);
                assert_eq!(plus.potential_u(), reference.potential_u(), "{fam} g={g}");
            }
        }
    }

    #[test]
    fn minus_partner_is_deformed_plus_constant() {
        for fam in [Family::L1, Family::L2] {
            let p = params(fam, 1, "3/2");
            let (_, minus) = dc_hamiltonians(&p).unwrap();
            let (_, c) = dc_reference(&p).unwrap();
            let deformed = hamiltonian_deformed(&p).unwrap().with_offset(c);
            assert_eq!(minus.potential_u(), deformed.potential_u());
        }
    }

    #[test]
    fn partner_states_match_deformed_states() {
        for fam in [Family::L1, Family::L2] {
            let p = params(fam, 2, "5/2");
            let pair = eigensystem_dc_pair(&p, 3).unwrap();
            let def = eigensystem_deformed(&p, 3).unwrap();
            for (k, (m, d)) in pair.minus.iter().zip(&def).enumerate() {
                for x in log_linear(1e-3, 6.0, 300) {
                    let (a, b) = (m.wavefunction.eval(x), d.wavefunction.eval(x));
                    assert!((a - b).abs() < 1e-9, "{fam} n={k} x={x}: {a} vs {b}");
                }
                let c = &pair.constants[k];
                assert!(
                    (c.norm * c.norm - m.energy).abs() < 1e-9 * m.energy,
                    "{fam} {} {}",
                    c.norm * c.norm,
                    m.energy
                );
            }
        }
    }

    #[test]
    fn partner_constants_closed_form() {
        // L1: κ = −2ω, L2: κ = 2(n+g+1/2)
        let p = ModelParams::new(Family::L1, 2, rat(3, 2), 1.7).unwrap();
        for c in eigensystem_dc_pair(&p, 3).unwrap().constants {
            assert!((c.kappa + 2.0 * 1.7).abs() < 1e-12, "{}", c.kappa);
        }
        let p = ModelParams::new(Family::L2, 2, rat(3, 2), 1.7).unwrap();
        for c in eigensystem_dc_pair(&p, 3).unwrap().constants {
            let want = 2.0 * (c.n as f64 + 2.0);
            assert!((c.kappa - want).abs() < 1e-12 * want, "{}", c.kappa);
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        let s = eigensystem_deformed(&params(Family::L2, 1, "1"), 5).unwrap();
        let (off, diag) = gram_defects(&gram_matrix(&s));
        assert!(off < 1e-10 && diag < 1e-10, "{off} {diag}");
    }

    #[test]
    fn report_shape() {
        let p = params(Family::L1, 1, "1");
        let s = eigensystem_deformed(&p, 1).unwrap();
        let v = serde_json::to_value(EigenSystemReport::new(&p, &s)).unwrap();
        assert_eq!(v["states"][1]["n"], 1);
        assert!(v["states"][0]["wavefunction"]["N"]["coeffs"].is_array());
        assert_eq!(v["params"]["g"], "1/1");
    }
}
