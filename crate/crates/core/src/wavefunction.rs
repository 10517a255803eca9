//! Ground-state wave functions of the covariant oscillator in the (z, t)
//! plane and their momentum-energy counterparts.
//!
//! All wave functions are real Gaussians normalized over the plane. The
//! Hermite functions here serve only as an analysis basis for the two-mode
//! (Schmidt) expansion of the boosted state.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{momentum_light_cone, to_light_cone, Rapidity, SpacetimeSeparation};
use crate::numerics::{
    fourier_2d, second_derivative, trapezoid_weights, FourierConvention, GridSpec,
};
use crate::tolerances;

/// (1/π)^{1/2}, the common normalization of every 2D wave function here.
pub const NORM: f64 = 0.564_189_583_547_756_3;

/// Ground state of the oscillator as seen from a frame boosted by `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostedGroundState {
    pub eta: Rapidity,
}

impl BoostedGroundState {
    pub fn new(eta: Rapidity) -> Self {
        BoostedGroundState { eta }
    }

    pub fn at_rest() -> Self {
        BoostedGroundState { eta: Rapidity::ZERO }
    }

    #[inline]
    pub fn psi(&self, z: f64, t: f64) -> f64 {
        psi_boosted(self, z, t)
    }

    #[inline]
    pub fn phi(&self, q_z: f64, q_0: f64) -> f64 {
        phi_momentum(self, q_z, q_0)
    }
}

/// Squeezed Gaussian (1/π)^{1/2} exp(−(e^{−2η} a² + e^{2η} b²)/2).
#[inline]
fn squeezed(eta: f64, a: f64, b: f64) -> f64 {
    NORM * (-0.5 * ((-2.0 * eta).exp() * a * a + (2.0 * eta).exp() * b * b)).exp()
}

pub fn psi_rest(z: f64, t: f64) -> f64 {
    NORM * (-0.5 * (z * z + t * t)).exp()
}

pub fn psi_boosted(state: &BoostedGroundState, z: f64, t: f64) -> f64 {
    let c = to_light_cone(SpacetimeSeparation::new(z, t));
    squeezed(state.eta.value(), c.u, c.v)
}

/// Two identical coupled oscillators; `eta` measures the coupling strength.
pub fn psi_coupled(x1: f64, x2: f64, eta: Rapidity) -> f64 {
    let e = eta.value();
    let sum = x1 + x2;
    let diff = x1 - x2;
    NORM * (-0.25 * ((-2.0 * e).exp() * sum * sum + (2.0 * e).exp() * diff * diff)).exp()
}

pub fn phi_momentum(state: &BoostedGroundState, q_z: f64, q_0: f64) -> f64 {
    let c = momentum_light_cone(q_z, q_0);
    squeezed(state.eta.value(), c.q_u, c.q_v)
}

/// Default finite-difference step for [`oscillator_equation_residual`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Residual of ½{(z² − t²) − (∂²_z − ∂²_t)}ψ_η = λψ_η with λ = 0, with the
/// derivatives taken by central differences of width `step`.
pub fn oscillator_equation_residual(state: &BoostedGroundState, z: f64, t: f64, step: f64) -> f64 {
    let psi = state.psi(z, t);
    let d_zz = second_derivative(|z| state.psi(z, t), z, step);
    let d_tt = second_derivative(|t| state.psi(z, t), t, step);
    0.5 * ((z * z - t * t) * psi - (d_zz - d_tt))
}

/// Orthonormal Hermite functions h_0(x) ..= h_nmax(x).
///
/// Uses the three-term recurrence on the normalized functions,
/// h_{n+1} = √(2/(n+1)) x h_n − √(n/(n+1)) h_{n−1}, so no factorials or raw
/// Hermite polynomial values appear.
pub fn hermite_functions(nmax: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(nmax + 1);
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if nmax >= 1 {
        h.push(2f64.sqrt() * x * h[0]);
    }
    for n in 1..nmax {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

/// Diagonal two-mode expansion ψ_η(z, t) = Σ c_n h_n(z) h_n(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtExpansion {
    pub eta: Rapidity,
    pub coefficients: Vec<f64>,
    /// Largest |∬ψ h_m h_n| with m ≠ n.
    pub max_cross_term: f64,
}

impl SchmidtExpansion {
    /// c_1 / c_0, or 0 when only c_0 was computed.
    pub fn ratio(&self) -> f64 {
        match self.coefficients.as_slice() {
            [c0, c1, ..] => c1 / c0,
            _ => 0.0,
        }
    }

    /// Successive ratios c_{n+1}/c_n for coefficients with |c_{n+1}| > `floor`.
    pub fn ratios(&self, floor: f64) -> Vec<f64> {
        self.coefficients
            .windows(2)
            .take_while(|w| w[1].abs() > floor)
            .map(|w| w[1] / w[0])
            .collect()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// Entropy −Σ c_n² ln c_n² of the truncated expansion.
    pub fn entropy(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c * c)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }
}

fn schmidt_grid(nmax: usize) -> GridSpec {
    // h_n turns over near √(2n+1); keep the domain well past that.
    let half = 12f64.max(((2 * nmax + 1) as f64).sqrt().ceil() + 8.0);
    let points = (2.0 * half / 0.06).round() as usize + 1;
    GridSpec::symmetric(half, points).expect("static grid is valid")
}

/// Overlap matrix C[m, n] = ∬ ψ_η(z, t) h_m(z) h_n(t) dz dt on `grid`.
fn overlap_matrix(eta: Rapidity, nmax: usize, grid: &GridSpec) -> DMatrix<f64> {
    let state = BoostedGroundState::new(eta);
    let x = grid.nodes();
    let w = trapezoid_weights(grid);
    let n = x.len();
    let mut basis = DMatrix::<f64>::zeros(n, nmax + 1);
    for (i, &xi) in x.iter().enumerate() {
        for (k, h) in hermite_functions(nmax, xi).into_iter().enumerate() {
            basis[(i, k)] = w[i] * h;
        }
    }
    let psi = DMatrix::from_fn(n, n, |i, j| state.psi(x[i], x[j]));
    basis.transpose() * psi * basis
}

/// Schmidt coefficients c_0..=c_nmax of ψ_η by 2D quadrature.
///
/// The quadrature is repeated at twice the resolution; a change above 1e-8
/// in any coefficient, or any off-diagonal overlap above 1e-8, is an error.
pub fn schmidt_coefficients(eta: Rapidity, nmax: usize) -> Result<SchmidtExpansion> {
    let grid = schmidt_grid(nmax);
    let coarse = overlap_matrix(eta, nmax, &grid);
    let fine = overlap_matrix(eta, nmax, &grid.refined());

    let change = (&fine - &coarse).amax();
    if change > tolerances::QUADRATURE_REFINEMENT {
        return Err(Error::tolerance("Schmidt quadrature refinement", change, tolerances::QUADRATURE_REFINEMENT));
    }

    let mut max_cross_term = 0.0f64;
    for m in 0..=nmax {
        for k in 0..=nmax {
            if m != k {
                max_cross_term = max_cross_term.max(fine[(m, k)].abs());
            }
        }
    }
    if max_cross_term > tolerances::SCHMIDT_CROSS_TERM {
        return Err(Error::tolerance("Schmidt cross term", max_cross_term, tolerances::SCHMIDT_CROSS_TERM));
    }

    Ok(SchmidtExpansion {
        eta,
        coefficients: (0..=nmax).map(|k| fine[(k, k)]).collect(),
        max_cross_term,
    })
}

/// Integration grid on which ψ_η has decayed below 1e-13 at the edges.
pub fn fourier_integration_grid(eta: Rapidity) -> GridSpec {
    // Along an edge |z| = L, max_t ψ_η = (1/π)^{1/2} exp(−L²/(2 cosh 2η)).
    let c = (2.0 * eta.value()).cosh();
    let half = (2.0 * c * (NORM / 1e-13f64).ln()).sqrt().ceil() + 1.0;
    // spacing 0.1 keeps aliased images far outside the sampled momenta
    let points = (2.0 * half / 0.1).round() as usize + 1;
    GridSpec::symmetric(half, points).expect("static grid is valid")
}

/// Largest pointwise |F[ψ_η] − φ_η| over `q_grid` for the given convention.
pub fn momentum_duality_error(
    eta: Rapidity,
    convention: FourierConvention,
    q_grid: &GridSpec,
) -> Result<f64> {
    let state = BoostedGroundState::new(eta);
    let field = fourier_2d(|z, t| state.psi(z, t), &fourier_integration_grid(eta), q_grid, convention)?;
    let q = q_grid.nodes();
    let mut worst = 0.0f64;
    for (j, &q0) in q.iter().enumerate() {
        for (i, &qz) in q.iter().enumerate() {
            let diff = field.get(i, j) - state.phi(qz, q0);
            worst = worst.max(diff.norm());
        }
    }
    Ok(worst)
}

/// The first convention, in [`FourierConvention::ALL`] order, under which the
/// transform of ψ_η reproduces φ_η at η = 0 and η = 1. Determined once and cached.
pub fn duality_convention() -> Result<FourierConvention> {
    static CACHE: OnceLock<Result<FourierConvention>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let q_grid = GridSpec::symmetric(6.0, 161)?;
            for convention in FourierConvention::ALL {
                let mut ok = true;
                for eta in [0.0, 1.0] {
                    let err = momentum_duality_error(Rapidity::new(eta)?, convention, &q_grid)?;
                    ok &= err < tolerances::FOURIER_POINTWISE;
                }
                if ok {
                    return Ok(convention);
                }
            }
            Err(Error::tolerance("Fourier duality (no convention passed)", f64::NAN, tolerances::FOURIER_POINTWISE))
        })
        .clone()
}
