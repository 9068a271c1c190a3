//! Linearly implicit SAV Fourier-spectral solver for the two-dimensional
//! nonlinear space-fractional generalized wave equation
//!
//! ```text
//! u_tt + kappa (-Laplacian)^{alpha/2} u + gamma1 (-Laplacian)^{alpha/2} u_t
//!      + gamma2 u_t + F'(u) = 0
//! ```
//!
//! on a periodic rectangle, with an exact discrete energy-dissipation law and
//! a rank-1 (Sherman-Morrison) fast solve per step.

pub mod config;
pub mod error;
pub mod experiments;
pub mod model;
pub mod output;
pub mod sav;
pub mod spectral;

pub use error::{Error, Result};
