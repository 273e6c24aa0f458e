//! Shared numerical kernels: half-line quadrature, evaluation grids and the
//! finite-difference spectrum oracle.

pub mod fd;
pub mod grid;
pub mod quadrature;

pub use fd::{
    count_below, fd_eigs, fd_ladder, ladder_csv, observed_order, tridiagonal_lowest, FdConfig,
    FdEigs, FdHamiltonian, LadderRow,
};
pub use grid::{linspace, log_linear};
pub use quadrature::{integrate_checked, tail_end, Quadrature, DEFAULT_ACCURACY};
