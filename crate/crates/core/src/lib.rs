//! Exceptional `X_ℓ` Laguerre polynomials and the exactly solvable systems
//! assembled from them: deformed radial oscillators, their Darboux-Crum
//! partners, radial Dirac / Dirac-Pauli reductions and spectral
//! Fokker-Planck solvers, each paired with an independent numerical oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod error;
pub mod fokker;
pub mod numerics;
pub mod polycore;
pub mod sqm;

pub use error::{Error, Result};
pub use polycore::{Family, ModelParams, PolyQ, Rational};
