use exlag::numerics::linspace;
use exlag::polycore::{deforming_xi_pair, exceptional_p, format_rational, PolyQ};
use exlag::ModelParams;
use serde::Serialize;

use crate::args::{Format, PolyArgs};
use crate::{versioned, Artifact, CliError, Outcome};

#[derive(Serialize)]
struct PolyEntry {
    n: usize,
    degree: usize,
    coeffs: Vec<String>,
    samples: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct XiPair {
    #[serde(rename = "xi(g)")]
    xi_g: Vec<String>,
    #[serde(rename = "xi(g+1)")]
    xi_g1: Vec<String>,
}

#[derive(Serialize)]
struct PolyTable {
    command: &'static str,
    params: ModelParams,
    classical_limit: bool,
    note: &'static str,
    xi: XiPair,
    polynomials: Vec<PolyEntry>,
}

fn strings(p: &PolyQ) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

pub fn run(a: &PolyArgs) -> Result<Outcome, CliError> {
    let params = a.model.params()?;
    let (xi_g, xi_g1) = deforming_xi_pair(&params)?;
    let etas = linspace(0.0, a.eta_max, a.samples);
    let polynomials = (0..=a.nmax)
        .map(|n| {
            let p = exceptional_p(&params, n)?;
            Ok(PolyEntry {
                n,
                degree: p.degree().unwrap_or(0),
                coeffs: strings(&p),
                samples: etas.iter().map(|&e| [e, p.eval_f64(e)]).collect(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let classical = params.ell == 0;
    let table = PolyTable {
        command: "poly",
        params: params.clone(),
        classical_limit: classical,
        note: if classical {
            "classical limit: P_{0,n} = L_n^(g-1/2)"
        } else {
            "exceptional X_l family, P_{l,0} = xi_l(eta; g+1)"
        },
        xi: XiPair {
            xi_g: strings(&xi_g),
            xi_g1: strings(&xi_g1),
        },
        polynomials,
    };
    let artifact = match a.format {
        Format::Json => Artifact::json("poly.json", &versioned(&table)),
        Format::Csv => {
            let mut s = String::from("n,eta,value\n");
            for p in &table.polynomials {
                for [e, v] in &p.samples {
                    s.push_str(&format!("{},{},{:e}\n", p.n, e, v));
                }
            }
            Artifact::text("poly.csv", s)
        }
    };
    let summary = vec![format!(
        "poly: {} ell={} g={}: {} polynomials{}",
        params.family,
        params.ell,
        format_rational(&params.g),
        a.nmax + 1,
        if classical { " (classical limit)" } else { "" }
    )];
    Ok(Outcome {
        artifacts: vec![artifact],
        passed: true,
        summary,
    })
}
