//! Numerical toolkit for the Lorentz-covariant harmonic oscillator.
//!
//! - [`kinematics`]: boosts, light-cone variables, rapidity from beam energy
//! - [`wavefunction`]: squeezed ground states in space-time and momentum-energy,
//!   the oscillator-equation residual and the two-mode (Schmidt) expansion
//! - [`density`]: marginal densities, the reduced density kernel obtained by
//!   tracing out the time separation, and its entropy
//! - [`parton`]: squeeze geometry and the decoherence ratio
//! - [`numerics`]: quadrature, Fourier transforms, finite differences, eigensolver
//! - [`cli`]: the `covosc` command-line front end

pub mod cli;
pub mod density;
pub mod error;
pub mod kinematics;
pub mod numerics;
pub mod parton;
pub mod tolerances;
pub mod wavefunction;

pub use error::{Error, Result};
pub use kinematics::Rapidity;
pub use numerics::GridSpec;
