use exlag::dirac::{
    components_csv, dirac_spectrum, dirac_state, pauli_central, pauli_cylindrical, scalar_1d,
    vector_potential_dc, vector_potential_deformed, Choice, CouplingProfile, ScalarLevel,
    SpectrumReport,
};
use exlag::numerics::log_linear;
use exlag::ModelParams;
use serde::Serialize;

use crate::args::{Coupling, DiracArgs};
use crate::{versioned, Artifact, CliError, Outcome};

#[derive(Serialize)]
struct ScalarReport {
    kind: &'static str,
    choice: Choice,
    params: ModelParams,
    #[serde(rename = "M")]
    mass: f64,
    levels: Vec<ScalarLevel>,
}

fn profile(a: &DiracArgs, params: &ModelParams) -> Result<CouplingProfile, CliError> {
    let choice: Choice = a.profile.into();
    Ok(match (a.coupling, choice) {
        (Coupling::Magnetic, Choice::Deformed) => vector_potential_deformed(params, a.m)?,
        (Coupling::Magnetic, Choice::DarbouxCrum) => vector_potential_dc(params, a.m)?,
        (Coupling::Central, c) => pauli_central(params, a.k, c)?,
        (Coupling::Cylindrical, c) => pauli_cylindrical(params, a.m, c)?,
        (Coupling::Scalar, _) => unreachable!("handled separately"),
    })
}

fn grid_for(support: f64, points: usize) -> Vec<f64> {
    log_linear(1e-3 * support, support, points.max(4))
}

pub fn run(a: &DiracArgs) -> Result<Outcome, CliError> {
    let params = a.model.params()?;
    if a.state > a.nmax {
        return Err(CliError::Usage(format!(
            "--state {} exceeds --nmax {}",
            a.state, a.nmax
        )));
    }
    if a.coupling == Coupling::Scalar {
        let sys = scalar_1d(&params, a.profile.into(), a.mass, a.nmax)?;
        let rep = ScalarReport {
            kind: "lorentz-scalar-1d",
            choice: a.profile.into(),
            params: params.clone(),
            mass: a.mass,
            levels: sys.levels.clone(),
        };
        let (up, down) = &sys.states[a.state];
        let grid = grid_for(up.support_end(), a.points);
        let mut csv = String::from("x,psi_plus,psi_minus\n");
        for &x in &grid {
            csv.push_str(&format!(
                "{x:.12e},{:.15e},{:.15e}\n",
                up.eval(x),
                down.eval(x)
            ));
        }
        let summary = sys
            .levels
            .iter()
            .map(|l| format!("n={} E^2={} E={:?}", l.n, l.script_e, l.energies))
            .collect();
        return Ok(Outcome {
            artifacts: vec![
                Artifact::json("spectrum.json", &versioned(&rep)),
                Artifact::text("components.csv", csv),
            ],
            passed: true,
            summary,
        });
    }
    let prof = profile(a, &params)?;
    let spec = dirac_spectrum(&prof, a.mass, a.nmax);
    let st = dirac_state(&prof, a.mass, a.state)?;
    let grid = grid_for(st.upper.support_end(), a.points);
    let rep = SpectrumReport::new(&prof, &spec);
    let summary = spec
        .levels
        .iter()
        .map(|l| format!("n={} E^2-M^2={} E={}", l.n, l.lambda, l.energy))
        .collect();
    Ok(Outcome {
        artifacts: vec![
            Artifact::json("spectrum.json", &versioned(&rep)),
            Artifact::text("components.csv", components_csv(&st, &grid)),
        ],
        passed: true,
        summary,
    })
}
