//! Library side of the `exlag` command-line tool: argument types, the four
//! commands and the output/manifest plumbing.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
mod dirac_cmd;
mod fp_cmd;
mod poly_cmd;
mod verify_cmd;

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub use args::{Cli, Command};
pub use verify_cmd::{verify_report, Check, Status, VerifyReport};

/// Version tag carried by every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Core(exlag::Error),
    Usage(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<exlag::Error> for CliError {
    fn from(e: exlag::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// `2` for invalid input, `1` for numerical or i/o failures.
    pub fn exit_code(&self) -> i32 {
        use exlag::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                E::ParameterRange(_)
                | E::RationalParse(_)
                | E::SingularDeformation { .. }
                | E::OutsideDomain(_)
                | E::MirroredBranch(_)
                | E::DegenerateMassless(_)
                | E::NonNormalizable(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

/// A data file produced by a command.
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

impl Artifact {
    pub fn json<T: Serialize>(file: &str, value: &T) -> Self {
        let mut contents = serde_json::to_string_pretty(value).expect("serializable report");
        contents.push('\n');
        Self {
            file: file.to_string(),
            contents,
        }
    }

    pub fn text(file: &str, contents: String) -> Self {
        Self {
            file: file.to_string(),
            contents,
        }
    }
}

/// Result of a command: files to write, whether all checks passed and a
/// short human summary.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub passed: bool,
    pub summary: Vec<String>,
}

/// `{schema_version, ...body}`.
#[derive(Serialize)]
pub struct Versioned<'a, T: Serialize> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn versioned<T: Serialize>(body: &T) -> Versioned<'_, T> {
    Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    }
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: &'a str,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    config: &'a Cli,
    outputs: Vec<ManifestEntry<'a>>,
    passed: bool,
    created_unix: u64,
}

/// Runs the command without touching the file system.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Poly(a) => poly_cmd::run(a),
        Command::Verify(a) => verify_cmd::run(a),
        Command::Dirac(a) => dirac_cmd::run(a),
        Command::Fp(a) => fp_cmd::run(a),
    }
}

/// Writes the artifacts of `outcome` and `manifest.json` into `dir`.
pub fn write_outputs(cli: &Cli, outcome: &Outcome, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for a in &outcome.artifacts {
        fs::write(dir.join(&a.file), &a.contents)?;
    }
    let created_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: "exlag",
        version: env!("CARGO_PKG_VERSION"),
        config: cli,
        outputs: outcome
            .artifacts
            .iter()
            .map(|a| ManifestEntry {
                file: &a.file,
                bytes: a.contents.len(),
            })
            .collect(),
        passed: outcome.passed,
        created_unix,
    };
    let m = Artifact::json("manifest.json", &manifest);
    fs::write(dir.join(m.file), m.contents)?;
    Ok(())
}

/// Full run: execute, write, and return the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli).and_then(|o| write_outputs(cli, &o, &cli.out).map(|_| o)) {
        Ok(o) => {
            for line in &o.summary {
                println!("{line}");
            }
            if o.passed {
                0
            } else {
                eprintln!("exlag {}: one or more checks failed", cli.command.name());
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
