use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exlag::polycore::parse_rational;
use exlag::{Family, ModelParams};
use serde::Serialize;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(
    name = "exlag",
    version,
    about = "Exceptional X_l Laguerre systems: tables, checks and oracles"
)]
pub struct Cli {
    /// Directory receiving the data files and manifest.json.
    #[arg(long, global = true, default_value = "exlag-out")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Coefficients of xi_l and P_{l,n} as exact rationals plus samples.
    Poly(PolyArgs),
    /// Residual, orthogonality, shape-invariance, Darboux-Crum and FD checks.
    Verify(VerifyArgs),
    /// Radial Dirac spectrum and (r, f+, f-) components.
    Dirac(DiracArgs),
    /// Spectral Fokker-Planck evolution compared with a Crank-Nicolson run.
    Fp(FpArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Poly(_) => "poly",
            Command::Verify(_) => "verify",
            Command::Dirac(_) => "dirac",
            Command::Fp(_) => "fp",
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: exlag::Error| e.to_string())
}

/// `g` must be written `p/q`; a bare integer or decimal is rejected.
fn parse_g(s: &str) -> Result<String, String> {
    if !s.contains('/') {
        return Err(format!(
            "g must be a rational \"p/q\" (e.g. 3/2 or 1/1), got {s:?}"
        ));
    }
    parse_rational(s).map_err(|e| e.to_string())?;
    Ok(s.trim().to_string())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    #[arg(long, default_value = "L1", value_parser = parse_family)]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    /// Coupling as "p/q".
    #[arg(long, default_value = "3/2", value_parser = parse_g)]
    pub g: String,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

impl ModelArgs {
    pub fn params(&self) -> exlag::Result<ModelParams> {
        ModelParams::new(self.family, self.ell, parse_rational(&self.g)?, self.omega)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PolyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    /// Number of sample points on 0 <= eta <= eta-max.
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    #[arg(long, default_value_t = 10.0)]
    pub eta_max: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 5)]
    pub nmax: usize,
    /// Negative control: shift every state's numerator by this relative amount.
    #[arg(long)]
    pub perturb: Option<f64>,
    /// Interior points of the finite-difference oracle (refined once to 2N+1).
    #[arg(long, default_value_t = 4000)]
    pub fd_n: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Deformed,
    DarbouxCrum,
}

impl From<Profile> for exlag::dirac::Choice {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Deformed => exlag::dirac::Choice::Deformed,
            Profile::DarbouxCrum => exlag::dirac::Choice::DarbouxCrum,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    /// Minimal coupling to a cylindrical magnetic field (label m, g = m + 1/2).
    Magnetic,
    /// Dirac-Pauli central electric field (label k < 0, g = |k|).
    Central,
    /// Dirac-Pauli cylindrical electric field (label m, g = m + 1/2).
    Cylindrical,
    /// 1+1 dimensional Lorentz scalar potential (uses --g).
    Scalar,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DiracArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Profile::Deformed)]
    pub profile: Profile,
    #[arg(long, value_enum, default_value_t = Coupling::Magnetic)]
    pub coupling: Coupling,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 5)]
    pub nmax: usize,
    /// Level whose components are written to components.csv.
    #[arg(long, default_value_t = 1)]
    pub state: usize,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Drift {
    Rayleigh,
    DeformedRayleigh,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FpArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Drift::DeformedRayleigh)]
    pub drift: Drift,
    /// Comparison times in units of 1/omega, comma separated.
    #[arg(long = "t", value_delimiter = ',', default_value = "0.5")]
    pub times: Vec<f64>,
    /// Largest number of modes available to the adaptive truncation.
    #[arg(long, default_value_t = 80)]
    pub ncap: usize,
    #[arg(long, default_value_t = 2000)]
    pub cells: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Largest accepted L1 distance between spectral and oracle densities.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}
