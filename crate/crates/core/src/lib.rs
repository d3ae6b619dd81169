//! Time-splitting Fourier pseudospectral solver for the weakly nonlinear
//! Dirac equation
//!
//! ```text
//! i d_t Phi = (-i sum_j sigma_j d_j + sigma_3) Phi + eps^2 F(Phi) Phi
//! ```
//!
//! on periodic 1D and 2D domains, with a harness for temporal, spatial,
//! long-time and energy convergence studies.

pub mod checks;
pub mod error;
pub mod harness;
pub mod integrators;
pub mod io;
pub mod model;
pub mod spectral;

pub use error::{Error, Result};
