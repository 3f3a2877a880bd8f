//! Shared numerical kernels: Lambert W, sparse SPD solves, least squares
//! and a finite-difference derivative checker.

mod fd;
mod fit;
mod lambert;
mod sparse;

pub use fd::fd_check;
pub use fit::{linear_fit, power_fit, FitResult};
pub use lambert::lambert_w0;
pub use sparse::{solve_spd, solve_spd_guess, CsrMatrix, SparseSystem, TripletMatrix};
