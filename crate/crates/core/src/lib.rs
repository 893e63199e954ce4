//! Simulation library for pumped two-mode Kerr nonlinear couplers
//! ("nonlinear quantum scissors"): exact Fock-space propagation, closed-form
//! truncated-state solutions, two dissipation models, and the fidelity /
//! entanglement measurement stack.

pub mod analytic;
pub mod dynamics;
pub mod eit;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod lindblad;
pub mod measures;
mod ode;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockDims, Mode, TwoModeState};
pub use hamiltonian::SystemParams;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
