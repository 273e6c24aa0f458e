use exlag::fokker::{
    bump_initial, compare_with_oracle, deformed_rayleigh, density_csv, fp_expand, rayleigh,
    FpReport, OracleConfig,
};
use serde::Serialize;

use crate::args::{Drift, FpArgs};
use crate::{versioned, Artifact, CliError, Outcome};

#[derive(Serialize)]
struct Report<'a> {
    command: &'static str,
    initial: &'static str,
    tolerance: f64,
    passed: bool,
    #[serde(flatten)]
    fp: &'a FpReport,
}

pub fn run(a: &FpArgs) -> Result<Outcome, CliError> {
    let params = a.model.params()?;
    if a.times.iter().any(|t| !(*t >= 0.0)) {
        return Err(CliError::Usage("--t values must be non-negative".into()));
    }
    let model = match a.drift {
        Drift::Rayleigh => rayleigh(&params.g, params.omega, a.ncap)?,
        Drift::DeformedRayleigh => deformed_rayleigh(&params, a.ncap)?,
    };
    let init = bump_initial(&model)?;
    let sol = fp_expand(&model, &init)?;
    let mut times: Vec<f64> = a.times.iter().map(|t| t / params.omega).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let cfg = OracleConfig {
        cells: a.cells,
        dt: a.dt,
    };
    let (cmp, spec, cn) = compare_with_oracle(&sol, &init, &times, cfg)?;
    let fp = FpReport::new(&sol, cfg, cmp);
    let passed = fp.comparisons.iter().all(|c| c.l1_distance < a.tolerance);
    let rep = Report {
        command: "fp",
        initial: "bump: phi_0 x^b exp(-eta), unit mass",
        tolerance: a.tolerance,
        passed,
        fp: &fp,
    };
    let summary = fp
        .comparisons
        .iter()
        .map(|c| {
            format!(
                "t={} L1(spectral, crank-nicolson)={:.3e} (n_max={})",
                c.t,
                c.l1_distance,
                sol.n_max()
            )
        })
        .collect();
    Ok(Outcome {
        artifacts: vec![
            Artifact::json("fp_report.json", &versioned(&rep)),
            Artifact::text("spectral.csv", density_csv(&spec)),
            Artifact::text("oracle.csv", density_csv(&cn)),
        ],
        passed,
        summary,
    })
}
