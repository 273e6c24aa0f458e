//! Prepotentials, Hamiltonians and closed-form eigensystems of the radial
//! oscillator, its deformations and their Darboux-Crum partners.
//!
//! Every function here is carried in the form
//! `C · e^{−aη/2} · x^p · N(η)/D(η)`, so derivatives, factorization operators
//! and Schrödinger residuals reduce to exact rational-function algebra in `η`.

mod eigen;
mod hamiltonian;
mod prepotential;
mod ratfn;
mod residual;
mod structured;

pub use eigen::{
    dc_energy, dc_hamiltonians, dc_identity_pointwise, dc_reference, eigensystem_dc_pair,
    eigensystem_deformed, fd_config_for, fd_origin_power, gram_defects, gram_matrix,
    hamiltonian_deformed, radial_oscillator, shape_invariance_pair, state_quadrature, DcPair,
    EigenState, EigenSystemReport, PartnerConstant, StateRecord,
};
pub use hamiltonian::{susy_apply, Hamiltonian, Sign};
pub use prepotential::{
    prepotential_w0, prepotential_wl_dc, prepotential_wl_deformed, Prepotential, PrepotentialRecord,
};
pub use ratfn::{PreparedRatFn, RatFn};
pub use residual::{
    deformed_residual_f64, residual_check, residual_grid, residual_numerator, residual_rows,
    ResidualNumerator, ResidualRow,
};
pub use structured::{StructuredFn, WavefunctionRecord};
