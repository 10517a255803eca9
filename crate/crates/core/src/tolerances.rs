//! Numerical tolerances shared by the library checks, the CLI metadata and
//! the acceptance suite.

/// Quadrature refinement: doubling the resolution may move a result by at most this.
pub const QUADRATURE_REFINEMENT: f64 = 1e-8;

/// Total probability of a marginal density or the trace of a density kernel.
pub const NORMALIZATION: f64 = 1e-8;

/// Total probability of a 2D density sampled on a user-supplied window.
pub const SAMPLED_2D_NORMALIZATION: f64 = 1e-6;

/// Off-diagonal Schmidt overlaps ∬ψ h_m h_n with m ≠ n.
pub const SCHMIDT_CROSS_TERM: f64 = 1e-8;

/// Agreement between the kernel entropy and a closed-form candidate.
pub const ENTROPY_MATCH: f64 = 1e-4;

/// Eigenvalues below this are dropped from entropy sums.
pub const EIGENVALUE_CUTOFF: f64 = 1e-14;

/// Eigenvalues below this (negative) value are an error.
pub const NEGATIVE_EIGENVALUE: f64 = -1e-8;

/// Asymmetry allowed before a matrix is rejected by the eigensolver.
pub const SYMMETRY: f64 = 1e-10;

/// Pointwise agreement of the Fourier transform of ψ with φ.
pub const FOURIER_POINTWISE: f64 = 1e-6;

/// Integrand magnitude required on the Fourier integration boundary.
pub const FOURIER_BOUNDARY: f64 = 1e-12;

/// Finite-difference residual of the oscillator equation at step 1e-3.
pub const PDE_RESIDUAL: f64 = 1e-5;
