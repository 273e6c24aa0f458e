//! Radial Dirac and Dirac-Pauli systems whose squared first-order pair
//! reduces to one of the radial Hamiltonians in [`crate::sqm`].
//!
//! Units `c = ħ = 1`, charge `q = 1`. Only radial functions are represented;
//! angular labels (`m`, `k`) are carried as metadata.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{half, int, to_f64, ModelParams, Rational};
use crate::sqm::{
    dc_energy, eigensystem_dc_pair, eigensystem_deformed, prepotential_wl_dc,
    prepotential_wl_deformed, susy_apply, PreparedRatFn, Prepotential, RatFn, Sign, StructuredFn,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CouplingKind {
    MinimalMagnetic,
    PauliCentralElectric,
    PauliCylindricalElectric,
    LorentzScalar1D,
}

/// Which prepotential the profile is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Choice {
    /// Deformed oscillator `W_ℓ`: unbroken SUSY, `E² − M² = 4nω`.
    Deformed,
    /// Darboux-Crum prepotential: broken SUSY.
    DarbouxCrum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Susy {
    Unbroken,
    Broken,
}

impl Choice {
    pub fn susy(self) -> Susy {
        match self {
            Choice::Deformed => Susy::Unbroken,
            Choice::DarbouxCrum => Susy::Broken,
        }
    }
}

/// Angular quantum label kept as metadata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    M(i64),
    K(i64),
    None,
}

/// Field profile `A(r) = g/r − W′(r)` (vector potential `A_φ` or `μE_r`).
///
/// Stored as `r·A(r) = g − Q(η)`, an exact rational function of `η = ωr²`.
#[derive(Clone, Debug)]
pub struct CouplingProfile {
    pub kind: CouplingKind,
    pub choice: Choice,
    pub label: Label,
    /// Model with `g` already mapped from the label.
    pub params: ModelParams,
    w: Prepotential,
    ra: RatFn,
    prepared: PreparedRatFn,
}

impl CouplingProfile {
    fn build(
        kind: CouplingKind,
        choice: Choice,
        label: Label,
        params: ModelParams,
    ) -> Result<Self> {
        let w = match choice {
            Choice::Deformed => prepotential_wl_deformed(&params)?,
            Choice::DarbouxCrum => prepotential_wl_dc(&params)?,
        };
        let ra = RatFn::constant(params.g.clone()) - w.derivative_q();
        let prepared = ra.prepare();
        Ok(Self {
            kind,
            choice,
            label,
            params,
            w,
            ra,
            prepared,
        })
    }

    pub fn prepotential(&self) -> &Prepotential {
        &self.w
    }

    pub fn susy(&self) -> Susy {
        self.choice.susy()
    }

    /// `r·A(r)` as a function of `η`.
    pub fn r_times_field(&self) -> &RatFn {
        &self.ra
    }

    /// `A(r)`.
    pub fn field(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::OutsideDomain(r));
        }
        Ok(self.prepared.eval(self.params.omega * r * r) / r)
    }

    /// `x·W′` rebuilt from the field: `g − r·A(r)`.
    pub fn rebuilt_q(&self) -> RatFn {
        RatFn::constant(self.params.g.clone()) - self.ra.clone()
    }

    /// Linear coupling `A ∝ r` (Landau levels, or the Dirac oscillator for
    /// the central electric case).
    pub fn is_linear(&self) -> bool {
        self.ra.num().degree() == Some(1)
            && self.ra.num().coeff(0) == int(0)
            && self.ra.den().degree() == Some(0)
    }

    /// `λ_n = E_n² − M²` in units of `ω`.
    pub fn level_epsilon(&self, n: usize) -> Rational {
        match self.choice {
            Choice::Deformed => int(4 * n as i64),
            Choice::DarbouxCrum => dc_energy(&self.params, n),
        }
    }
}

fn half_odd_g(params: &ModelParams, m: i64) -> Result<ModelParams> {
    if m < 0 {
        return Err(Error::MirroredBranch(format!(
            "m = {m} < 0; only m >= 0 with positive flux is implemented"
        )));
    }
    params.with_g(int(m) + half())
}

/// Deformed Landau system: `A_φ^{(ℓ)} = ωr − [ℓ/r + d/dr ln ξ_ℓ(η; g+1)/ξ_ℓ(η; g)]`,
/// `g = m + 1/2`.
pub fn vector_potential_deformed(params: &ModelParams, m: i64) -> Result<CouplingProfile> {
    let p = half_odd_g(params, m)?;
    CouplingProfile::build(
        CouplingKind::MinimalMagnetic,
        Choice::Deformed,
        Label::M(m),
        p,
    )
}

/// Vector potential from the Darboux-Crum prepotential, `g = m + 1/2`.
pub fn vector_potential_dc(params: &ModelParams, m: i64) -> Result<CouplingProfile> {
    let p = half_odd_g(params, m)?;
    CouplingProfile::build(
        CouplingKind::MinimalMagnetic,
        Choice::DarbouxCrum,
        Label::M(m),
        p,
    )
}

/// Central electric (Dirac-Pauli) coupling `μE_r` with `g = |k|`, `k < 0`.
pub fn pauli_central(params: &ModelParams, k: i64, choice: Choice) -> Result<CouplingProfile> {
    if k == 0 {
        return Err(Error::ParameterRange(
            "k = 0 is not a valid Dirac-Pauli label".into(),
        ));
    }
    if k > 0 {
        return Err(Error::MirroredBranch(format!(
            "k = {k} > 0; only k < 0 is implemented"
        )));
    }
    let p = params.with_g(int(k.abs()))?;
    CouplingProfile::build(CouplingKind::PauliCentralElectric, choice, Label::K(k), p)
}

/// Cylindrical electric coupling, `μE_r ↔ A_φ`, `g = m + 1/2`.
pub fn pauli_cylindrical(params: &ModelParams, m: i64, choice: Choice) -> Result<CouplingProfile> {
    let p = half_odd_g(params, m)?;
    CouplingProfile::build(
        CouplingKind::PauliCylindricalElectric,
        choice,
        Label::M(m),
        p,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiracLevel {
    pub n: usize,
    /// `E² − M²`.
    pub lambda: f64,
    #[serde(rename = "E")]
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiracSpectrum {
    #[serde(rename = "M")]
    pub mass: f64,
    pub susy: Susy,
    pub levels: Vec<DiracLevel>,
}

/// `E_n = +√(M² + λ_n)`.
pub fn dirac_spectrum(profile: &CouplingProfile, mass: f64, n_max: usize) -> DiracSpectrum {
    let om = profile.params.omega;
    let levels = (0..=n_max)
        .map(|n| {
            let lambda = to_f64(&profile.level_epsilon(n)) * om;
            DiracLevel {
                n,
                lambda,
                energy: (mass * mass + lambda).sqrt(),
            }
        })
        .collect();
    DiracSpectrum {
        mass,
        susy: profile.susy(),
        levels,
    }
}

/// Two-component radial state with `∫(f₊² + f₋²) dr = 1`.
#[derive(Clone, Debug)]
pub struct DiracState {
    pub n: usize,
    pub energy: f64,
    pub mass: f64,
    pub upper: StructuredFn,
    pub lower: StructuredFn,
}

impl DiracState {
    /// `‖f₋‖ / ‖f₊‖`.
    pub fn component_ratio(&self) -> Result<f64> {
        Ok((self.lower.norm_sq()? / self.upper.norm_sq()?).sqrt())
    }

    /// Sign of `f₋` near the origin (`f₊` is positive there by convention).
    pub fn lower_sign(&self) -> i32 {
        self.lower.sign_near_zero()
    }
}

fn upper_component(profile: &CouplingProfile, n: usize) -> Result<StructuredFn> {
    Ok(match profile.choice {
        Choice::Deformed => {
            eigensystem_deformed(&profile.params, n)?
                .swap_remove(n)
                .wavefunction
        }
        Choice::DarbouxCrum => {
            eigensystem_dc_pair(&profile.params, n)?
                .plus
                .swap_remove(n)
                .wavefunction
        }
    })
}

/// `f₊` from the radial eigenfunction, `f₋ = A⁺f₊/(E+M)`, jointly normalized.
pub fn dirac_state(profile: &CouplingProfile, mass: f64, n: usize) -> Result<DiracState> {
    let lambda = to_f64(&profile.level_epsilon(n)) * profile.params.omega;
    let energy = (mass * mass + lambda).sqrt();
    if energy + mass == 0.0 {
        return Err(Error::DegenerateMassless(n));
    }
    let upper = upper_component(profile, n)?;
    let lower = susy_apply(Sign::Plus, &profile.w, &upper).scaled(1.0 / (energy + mass));
    let total = upper.norm_sq()? + lower.norm_sq()?;
    let s = total.sqrt().recip();
    Ok(DiracState {
        n,
        energy,
        mass,
        upper: upper.scaled(s),
        lower: lower.scaled(s),
    })
}

/// Pair-equation residuals on a grid, relative sup-norm:
/// `A⁺f₊ = (E+M) f₋` and `A⁻f₋ = (E−M) f₊`.
pub fn pair_residuals(profile: &CouplingProfile, st: &DiracState, grid: &[f64]) -> (f64, f64) {
    let ap = susy_apply(Sign::Plus, &profile.w, &st.upper);
    let am = susy_apply(Sign::Minus, &profile.w, &st.lower);
    let rel = |a: &StructuredFn, b: &StructuredFn, k: f64| {
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for &x in grid {
            let (u, v) = (a.eval(x), k * b.eval(x));
            num = num.max((u - v).abs());
            den = den.max(u.abs().max(v.abs()));
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    };
    (
        rel(&ap, &st.lower, st.energy + st.mass),
        rel(&am, &st.upper, st.energy - st.mass),
    )
}

/// `{kind, params, M, susy, levels: [{n, E}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub kind: CouplingKind,
    pub choice: Choice,
    pub label: Label,
    pub params: ModelParams,
    #[serde(rename = "M")]
    pub mass: f64,
    pub susy: Susy,
    pub levels: Vec<DiracLevel>,
}

impl SpectrumReport {
    pub fn new(profile: &CouplingProfile, spectrum: &DiracSpectrum) -> Self {
        Self {
            kind: profile.kind,
            choice: profile.choice,
            label: profile.label,
            params: profile.params.clone(),
            mass: spectrum.mass,
            susy: spectrum.susy,
            levels: spectrum.levels.clone(),
        }
    }
}

/// `r,f_plus,f_minus` with a header row.
pub fn components_csv(st: &DiracState, grid: &[f64]) -> String {
    let mut out = String::from("r,f_plus,f_minus\n");
    for &r in grid {
        out.push_str(&format!(
            "{r:.12e},{:.15e},{:.15e}\n",
            st.upper.eval(r),
            st.lower.eval(r)
        ));
    }
    out
}

/// `1+1`-D Dirac equation with Lorentz scalar potential `V_s = −W′ − M`.
#[derive(Clone, Debug)]
pub struct ScalarDirac {
    pub profile: CouplingProfile,
    pub mass: f64,
    pub levels: Vec<ScalarLevel>,
    pub states: Vec<(StructuredFn, StructuredFn)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarLevel {
    pub n: usize,
    /// `𝓔 = E²`.
    pub script_e: f64,
    /// `±√𝓔`, a single `0` for the unpaired zero mode.
    pub energies: Vec<f64>,
}

impl ScalarDirac {
    /// `V_s(x) = −W′(x) − M`.
    pub fn scalar_potential(&self, x: f64) -> Result<f64> {
        Ok(-self.profile.w.derivative_eval(x)? - self.mass)
    }
}

/// Components `(ψ₊, ψ₋)` with `ψ₋ = A⁺ψ₊/E` on the positive branch; the
/// `E → −E` branch flips the sign of `ψ₋`.
pub fn scalar_1d(
    params: &ModelParams,
    choice: Choice,
    mass: f64,
    n_max: usize,
) -> Result<ScalarDirac> {
    let mut profile = CouplingProfile::build(
        CouplingKind::LorentzScalar1D,
        choice,
        Label::None,
        params.clone(),
    )?;
    profile.ra = RatFn::zero();
    profile.prepared = profile.ra.prepare();
    let uppers: Vec<StructuredFn> = match choice {
        Choice::Deformed => eigensystem_deformed(params, n_max)?
            .into_iter()
            .map(|s| s.wavefunction)
            .collect(),
        Choice::DarbouxCrum => eigensystem_dc_pair(params, n_max)?
            .plus
            .into_iter()
            .map(|s| s.wavefunction)
            .collect(),
    };
    let mut levels = Vec::with_capacity(uppers.len());
    let mut states = Vec::with_capacity(uppers.len());
    for (n, up) in uppers.into_iter().enumerate() {
        let script_e = to_f64(&profile.level_epsilon(n)) * params.omega;
        let e = script_e.sqrt();
        let energies = if script_e == 0.0 {
            vec![0.0]
        } else {
            vec![-e, e]
        };
        let down = if script_e == 0.0 {
            StructuredFn::zero(params.omega)
        } else {
            susy_apply(Sign::Plus, &profile.w, &up).scaled(1.0 / e)
        };
        let s = (up.norm_sq()? + down.norm_sq()?).sqrt().recip();
        states.push((up.scaled(s), down.scaled(s)));
        levels.push(ScalarLevel {
            n,
            script_e,
            energies,
        });
    }
    Ok(ScalarDirac {
        profile,
        mass,
        levels,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::log_linear;
    use crate::polycore::float::xi_f64;
    use crate::polycore::parse_rational;
    use crate::Family;

    fn base(f: Family, ell: u32) -> ModelParams {
        ModelParams::new(f, ell, int(1), 1.0).unwrap()
    }

    #[test]
    fn landau_limit_is_linear() {
        let p = vector_potential_deformed(&base(Family::L1, 0), 2).unwrap();
        assert!(p.is_linear());
        assert!((p.field(1.7).unwrap() - 1.7).abs() < 1e-15);
        assert_eq!(p.params.g, parse_rational("5/2").unwrap());
    }

    #[test]
    fn deformed_field_against_direct_formula() {
        // A = ωr − [ℓ/r + 2ωr(ξ1′/ξ1 − ξ0′/ξ0)], ξ in floating point
        let (om, ell) = (1.3, 2u32);
        let params = ModelParams::new(Family::L1, ell, int(1), om).unwrap();
        let prof = vector_potential_deformed(&params, 0).unwrap();
        let g = 0.5;
        let (x0, x1) = (xi_f64(Family::L1, ell, g), xi_f64(Family::L1, ell, g + 1.0));
        let (d0, d1) = (x0.derivative(), x1.derivative());
        for r in log_linear(1e-2, 5.0, 100) {
            let eta = om * r * r;
            let bracket = ell as f64 / r
                + 2.0 * om * r * (d1.eval(eta) / x1.eval(eta) - d0.eval(eta) / x0.eval(eta));
            let want = om * r - bracket;
            assert!(
                (prof.field(r).unwrap() - want).abs() < 1e-12 * want.abs().max(1.0),
                "{r}"
            );
        }
    }

    #[test]
    fn rebuilt_prepotential_is_exact() {
        for prof in [
            vector_potential_deformed(&base(Family::L2, 2), 1).unwrap(),
            vector_potential_dc(&base(Family::L1, 1), 1).unwrap(),
            pauli_central(&base(Family::L2, 1), -2, Choice::Deformed).unwrap(),
        ] {
            assert_eq!(prof.rebuilt_q(), prof.prepotential().derivative_q());
        }
    }

    #[test]
    fn dc_field_leading_terms() {
        // L1: −ωr − (ℓ−1)/r − ...; large r behaviour −ωr
        let p = vector_potential_dc(&base(Family::L1, 1), 1).unwrap();
        let r = 40.0;
        assert!((p.field(r).unwrap() / r + 1.0).abs() < 1e-2);
        // L2, m=0: Coulomb-like coefficient 2g+ℓ = 2 near the origin
        let p = vector_potential_dc(&base(Family::L2, 1), 0).unwrap();
        let r = 1e-6;
        assert!((p.field(r).unwrap() * r - 2.0).abs() < 1e-9);
    }

    #[test]
    fn branch_restrictions() {
        assert!(matches!(
            vector_potential_deformed(&base(Family::L1, 1), -1),
            Err(Error::MirroredBranch(_))
        ));
        assert!(matches!(
            pauli_central(&base(Family::L1, 1), 2, Choice::Deformed),
            Err(Error::MirroredBranch(_))
        ));
        assert!(matches!(
            pauli_central(&base(Family::L1, 1), 0, Choice::Deformed),
            Err(Error::ParameterRange(_))
        ));
        // L1 Darboux-Crum needs g > 1/2, i.e. m >= 1
        assert!(vector_potential_dc(&base(Family::L1, 1), 0).is_err());
    }

    #[test]
    fn spectra() {
        let p = vector_potential_deformed(&base(Family::L1, 1), 0).unwrap();
        let s = dirac_spectrum(&p, 1.0, 3);
        assert_eq!(s.levels[2].energy, 3.0);
        assert_eq!(s.susy, Susy::Unbroken);
        let p = vector_potential_dc(&base(Family::L2, 1), 0).unwrap();
        let s = dirac_spectrum(&p, 0.0, 2);
        assert_eq!(s.levels[0].energy, 2.0);
        assert_eq!(s.susy, Susy::Broken);
        let landau = dirac_spectrum(
            &vector_potential_deformed(&base(Family::L1, 0), 0).unwrap(),
            0.7,
            6,
        );
        for w in landau.levels.windows(2) {
            let gap = w[1].energy.powi(2) - w[0].energy.powi(2);
            assert!((gap - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dirac_oscillator_label() {
        let p = pauli_central(&base(Family::L1, 0), -1, Choice::Deformed).unwrap();
        assert!(p.is_linear());
        assert_eq!(p.params.g, int(1));
        let s = dirac_spectrum(&p, 1.0, 3);
        assert!((s.levels[3].lambda - 12.0).abs() < 1e-15);
    }

    #[test]
    fn cylindrical_aliases_minimal() {
        let params = base(Family::L2, 2);
        let a = dirac_spectrum(&vector_potential_deformed(&params, 1).unwrap(), 0.5, 5);
        let b = dirac_spectrum(
            &pauli_cylindrical(&params, 1, Choice::Deformed).unwrap(),
            0.5,
            5,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn unbroken_ground_state_has_no_lower_component() {
        let p = vector_potential_deformed(&base(Family::L2, 1), 0).unwrap();
        let st = dirac_state(&p, 1.0, 0).unwrap();
        assert!(st.lower.is_zero());
        assert_eq!(st.component_ratio().unwrap(), 0.0);
        assert!(matches!(
            dirac_state(&p, 0.0, 0),
            Err(Error::DegenerateMassless(0))
        ));
    }

    #[test]
    fn pair_equations_hold() {
        let grid = log_linear(1e-3, 6.0, 400);
        for prof in [
            vector_potential_deformed(&base(Family::L1, 2), 1).unwrap(),
            vector_potential_dc(&base(Family::L2, 1), 0).unwrap(),
        ] {
            for n in 0..=3 {
                let st = dirac_state(&prof, 1.0, n).unwrap();
                let (r1, r2) = pair_residuals(&prof, &st, &grid);
                assert!(r1 < 1e-10 && r2 < 1e-10, "n={n}: {r1} {r2}");
                let total = st.upper.norm_sq().unwrap() + st.lower.norm_sq().unwrap();
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
        let broken = dirac_state(
            &vector_potential_dc(&base(Family::L2, 1), 0).unwrap(),
            1.0,
            0,
        )
        .unwrap();
        assert!(broken.component_ratio().unwrap() > 1e-3);
    }

    #[test]
    fn scalar_1d_spectrum_and_zero_mode() {
        let sd = scalar_1d(&base(Family::L1, 1), Choice::Deformed, 0.3, 3).unwrap();
        assert_eq!(sd.levels[0].energies, vec![0.0]);
        assert!(sd.states[0].1.is_zero());
        assert!((sd.levels[2].energies[1] - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sd.levels[2].energies[0], -sd.levels[2].energies[1]);
        let w = prepotential_wl_deformed(&base(Family::L1, 1)).unwrap();
        for &x in &[0.2, 1.0, 2.5] {
            let vs = sd.scalar_potential(x).unwrap();
            assert!((vs + w.derivative_eval(x).unwrap() + 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn report_and_csv() {
        let p = vector_potential_deformed(&base(Family::L1, 1), 0).unwrap();
        let v = serde_json::to_value(SpectrumReport::new(&p, &dirac_spectrum(&p, 1.0, 2))).unwrap();
        assert_eq!(v["susy"], "unbroken");
        assert_eq!(v["levels"][2]["E"], 3.0);
        assert_eq!(v["kind"], "MinimalMagnetic");
        let st = dirac_state(&p, 1.0, 1).unwrap();
        let csv = components_csv(&st, &[0.5, 1.0]);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("r,f_plus,f_minus\n"));
    }
}
