use thiserror::Error;

/// Errors raised while constructing or evaluating the deformed systems.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("invalid rational literal {0:?}: expected \"p/q\" with q != 0")]
    RationalParse(String),

    #[error("deforming polynomial {name} has {roots} zero(s) on (0, inf); the potential would be singular")]
    SingularDeformation { name: String, roots: usize },

    #[error("evaluation point x = {0} is outside the open half-line")]
    OutsideDomain(f64),

    #[error("unimplemented mirrored branch: {0}")]
    MirroredBranch(String),

    #[error("E + M = 0 for state n = {0}: the lower component is undefined")]
    DegenerateMassless(usize),

    #[error("not normalizable on (0, inf): {0}")]
    NonNormalizable(String),

    #[error("quadrature did not converge: estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    #[error("Sturm count mismatch: expected {expected} eigenvalues below {bound}, found {found}")]
    SturmMismatch {
        expected: usize,
        found: usize,
        bound: f64,
    },

    #[error("spectral truncation not converged: tail ratio {ratio:e} exceeds {tolerance:e}")]
    TruncationTail { ratio: f64, tolerance: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
