//! Probability densities, the partial trace over the time separation, and the
//! entropy of the resulting reduced state.
//!
//! Two entropies are in play and they are different numbers. The von Neumann
//! entropy −Tr(ρ ln ρ) of the reduced density operator K(z, z′) is zero at rest;
//! the differential entropy −∫ρ(z) ln ρ(z) dz of its diagonal is not. Both are
//! computed, together with two closed-form candidates for the operator entropy,
//! and [`EntropyReport`] records which candidate the eigenvalue computation
//! confirms.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Rapidity;
use crate::numerics::{integrate_1d, symmetric_eigen, trapezoid, trapezoid_weights, GridSpec, QuadratureRule};
use crate::tolerances;
use crate::wavefunction::BoostedGroundState;

/// Number of leading eigenvalues kept in an [`EntropyReport`].
pub const REPORTED_SPECTRUM: usize = 32;

pub const DEFAULT_POINTS: usize = 401;

/// |ψ_η(z, t)|².
pub fn density_zt(eta: Rapidity, z: f64, t: f64) -> f64 {
    BoostedGroundState::new(eta).psi(z, t).powi(2)
}

/// (1/(π cosh 2η))^{1/2} exp(−z²/cosh 2η).
pub fn marginal_closed_form(eta: Rapidity, z: f64) -> f64 {
    let c = (2.0 * eta.value()).cosh();
    (1.0 / (PI * c)).sqrt() * (-z * z / c).exp()
}

/// Standard deviation (cosh 2η / 2)^{1/2} of the z marginal.
pub fn marginal_std_dev(eta: Rapidity) -> f64 {
    ((2.0 * eta.value()).cosh() / 2.0).sqrt()
}

/// Default z grid: 401 points on [−L, L], L = max(12, ⌈7σ⌉).
pub fn default_grid(eta: Rapidity) -> GridSpec {
    let half = 12f64.max((7.0 * marginal_std_dev(eta)).ceil());
    GridSpec::symmetric(half, DEFAULT_POINTS).expect("static grid is valid")
}

/// Default 2D sampling grid for the (z, t) plane: the z extent of
/// [`default_grid`] with a spacing of at most 0.1 and at most 3/4 of the
/// narrow light-cone width e^{−|η|}/√2, so the trapezoid sum of the sampled
/// density resolves the squeezed direction.
pub fn sampling_grid(eta: Rapidity) -> GridSpec {
    let half = default_grid(eta).max;
    let narrow = (-eta.value().abs()).exp() * std::f64::consts::FRAC_1_SQRT_2;
    let step = 0.1f64.min(0.75 * narrow);
    let points = (2.0 * half / step).ceil() as usize + 1;
    GridSpec::symmetric(half, points).expect("derived grid is valid")
}

fn require_coverage(eta: Rapidity, grid: &GridSpec) -> Result<()> {
    let required = 6.0 * marginal_std_dev(eta);
    if grid.covers(required) {
        Ok(())
    } else {
        Err(Error::GridTooNarrow {
            min: grid.min,
            max: grid.max,
            required,
        })
    }
}

/// Grid for the t integral at fixed z. At fixed z the density is Gaussian in t
/// with standard deviation (2 cosh 2η)^{-1/2} centered at z tanh 2η, so the
/// spacing follows that width and the range follows the z grid.
fn time_grid(eta: Rapidity, z_grid: &GridSpec) -> GridSpec {
    let sigma_t = 1.0 / (2.0 * (2.0 * eta.value()).cosh()).sqrt();
    let step = z_grid.spacing().min(0.5 * sigma_t);
    let half = z_grid.min.abs().max(z_grid.max.abs()) + 12.0 * sigma_t;
    let points = (2.0 * half / step).ceil() as usize + 1;
    GridSpec::symmetric(half, points).expect("derived grid is valid")
}

/// Samples of a 1D density on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityDensity1D {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ProbabilityDensity1D {
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.values)
    }

    pub fn mean(&self) -> f64 {
        let xs = self.grid.nodes();
        let m: Vec<f64> = xs.iter().zip(&self.values).map(|(x, p)| x * p).collect();
        trapezoid(&self.grid, &m) / self.integral()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let xs = self.grid.nodes();
        let m: Vec<f64> = xs
            .iter()
            .zip(&self.values)
            .map(|(x, p)| (x - mean).powi(2) * p)
            .collect();
        trapezoid(&self.grid, &m) / self.integral()
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Integrates `density(x, y)` over y at every node of `x_grid`.
pub(crate) fn marginalize(
    density: impl Fn(f64, f64) -> f64,
    x_grid: &GridSpec,
    y_grid: &GridSpec,
) -> Vec<f64> {
    let ys = y_grid.nodes();
    let w = trapezoid_weights(y_grid);
    x_grid
        .nodes()
        .into_iter()
        .map(|x| ys.iter().zip(&w).map(|(&y, w)| w * density(x, y)).sum())
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// ρ_η(z) = ∫ |ψ_η(z, t)|² dt by quadrature at every grid node.
pub fn marginal_numeric(eta: Rapidity, grid: &GridSpec) -> Result<ProbabilityDensity1D> {
    require_coverage(eta, grid)?;
    let t_grid = time_grid(eta, grid);
    let density = |z, t| density_zt(eta, z, t);
    let coarse = marginalize(density, grid, &t_grid);
    let fine = marginalize(density, grid, &t_grid.refined());
    let change = max_abs_diff(&coarse, &fine);
    if change > tolerances::QUADRATURE_REFINEMENT {
        return Err(Error::tolerance("marginal refinement", change, tolerances::QUADRATURE_REFINEMENT));
    }
    Ok(ProbabilityDensity1D {
        grid: *grid,
        values: fine,
    })
}

/// Reduced density operator in z, discretized as K_ij = K(z_i, z_j) Δz.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityKernel {
    pub grid: GridSpec,
    pub matrix: DMatrix<f64>,
    /// Quadrature spacing folded into `matrix`.
    pub weight: f64,
}

impl DensityKernel {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|k| k * k).sum()
    }

    /// K(z, z) at each grid node (unweighted).
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|k| k / self.weight).collect()
    }

    /// Kernel value K(z_i, z_j) (unweighted).
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)] / self.weight
    }

    /// Eigenvalues of the weighted matrix in descending order.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = symmetric_eigen(&self.matrix)?;
        let values: Vec<f64> = eig.values.iter().copied().collect();
        if let Some(&lowest) = values.last() {
            if lowest < tolerances::NEGATIVE_EIGENVALUE {
                return Err(Error::NegativeEigenvalue(lowest));
            }
        }
        Ok(values)
    }
}

fn kernel_values(eta: Rapidity, grid: &GridSpec, t_grid: &GridSpec) -> DMatrix<f64> {
    let state = BoostedGroundState::new(eta);
    let zs = grid.nodes();
    let ts = t_grid.nodes();
    let w = trapezoid_weights(t_grid);
    let samples = DMatrix::from_fn(zs.len(), ts.len(), |i, j| state.psi(zs[i], ts[j]));
    let weighted = DMatrix::from_fn(zs.len(), ts.len(), |i, j| samples[(i, j)] * w[j]);
    let k = &weighted * samples.transpose();
    // the product is symmetric up to rounding; make it exactly so
    (&k + k.transpose()) * 0.5
}

/// K(z, z′) = ∫ ψ_η(z, t) ψ_η(z′, t) dt, the time separation traced out.
pub fn reduced_density_kernel(eta: Rapidity, grid: &GridSpec) -> Result<DensityKernel> {
    require_coverage(eta, grid)?;
    let t_grid = time_grid(eta, grid);
    let coarse = kernel_values(eta, grid, &t_grid);
    let fine = kernel_values(eta, grid, &t_grid.refined());
    let change = (&fine - &coarse).amax();
    if change > tolerances::QUADRATURE_REFINEMENT {
        return Err(Error::tolerance("kernel refinement", change, tolerances::QUADRATURE_REFINEMENT));
    }
    let weight = grid.spacing();
    Ok(DensityKernel {
        grid: *grid,
        matrix: fine * weight,
        weight,
    })
}

/// x ln x with 0 ln 0 = 0.
fn x_ln_x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// −Σ λ ln λ over eigenvalues above the cutoff.
pub fn entropy_from_spectrum(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|&&l| l > tolerances::EIGENVALUE_CUTOFF)
        .map(|&l| x_ln_x(l))
        .sum::<f64>()
}

/// von Neumann entropy of the kernel in nats.
pub fn von_neumann_entropy_numeric(kernel: &DensityKernel) -> Result<f64> {
    Ok(entropy_from_spectrum(&kernel.spectrum()?))
}

/// (cosh η/2)² ln(cosh η/2)² − (sinh η/2)² ln(sinh η/2)².
pub fn entropy_half_rapidity_form(eta: Rapidity) -> f64 {
    let half = 0.5 * eta.value();
    x_ln_x(half.cosh().powi(2)) - x_ln_x(half.sinh().powi(2))
}

/// cosh²η ln cosh²η − sinh²η ln sinh²η, the entropy of a geometric spectrum
/// with ratio tanh²η.
pub fn entropy_schmidt_closed_form(eta: Rapidity) -> f64 {
    let e = eta.value();
    x_ln_x(e.cosh().powi(2)) - x_ln_x(e.sinh().powi(2))
}

/// Differential entropy ½(1 + ln(π cosh 2η)) of the Gaussian marginal.
pub fn differential_entropy_marginal(eta: Rapidity) -> f64 {
    0.5 * (1.0 + (PI * (2.0 * eta.value()).cosh()).ln())
}

/// −∫ ρ_η(z) ln ρ_η(z) dz by quadrature, for cross-checking the closed form.
pub fn differential_entropy_quadrature(eta: Rapidity) -> Result<f64> {
    let c = (2.0 * eta.value()).cosh();
    let log_norm = -0.5 * (PI * c).ln();
    let integrand = |z: f64| {
        let rho = marginal_closed_form(eta, z);
        -rho * (log_norm - z * z / c)
    };
    let grid = default_grid(eta);
    integrate_1d(integrand, &QuadratureRule::trapezoid(grid.min, grid.max, grid.points)?)
}

/// Which closed form(s) the eigenvalue entropy agrees with to 1e-4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMatch {
    /// The η/2 form only.
    HalfRapidityForm,
    /// The cosh²η ln cosh²η − sinh²η ln sinh²η form only.
    SchmidtClosedForm,
    /// Both (they coincide at η = 0).
    Both,
    Neither,
}

impl EntropyMatch {
    pub fn classify(s_numeric: f64, s_half: f64, s_schmidt: f64) -> Self {
        let tol = tolerances::ENTROPY_MATCH;
        match ((s_numeric - s_half).abs() < tol, (s_numeric - s_schmidt).abs() < tol) {
            (true, true) => EntropyMatch::Both,
            (true, false) => EntropyMatch::HalfRapidityForm,
            (false, true) => EntropyMatch::SchmidtClosedForm,
            (false, false) => EntropyMatch::Neither,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EntropyMatch::HalfRapidityForm => "half_rapidity_form",
            EntropyMatch::SchmidtClosedForm => "schmidt_closed_form",
            EntropyMatch::Both => "both",
            EntropyMatch::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub eta: Rapidity,
    pub s_numeric: f64,
    pub s_half_rapidity_form: f64,
    pub s_schmidt_closed_form: f64,
    pub s_differential_marginal: f64,
    pub matched_form: EntropyMatch,
    pub match_tolerance: f64,
    pub trace: f64,
    pub purity: f64,
    /// Leading eigenvalues of the kernel, at most 32.
    pub spectrum: Vec<f64>,
}

pub fn entropy_report(eta: Rapidity) -> Result<EntropyReport> {
    entropy_report_on(eta, &default_grid(eta))
}

pub fn entropy_report_on(eta: Rapidity, grid: &GridSpec) -> Result<EntropyReport> {
    let kernel = reduced_density_kernel(eta, grid)?;
    let trace = kernel.trace();
    if (trace - 1.0).abs() > tolerances::NORMALIZATION {
        return Err(Error::tolerance("kernel trace", (trace - 1.0).abs(), tolerances::NORMALIZATION));
    }
    let spectrum = kernel.spectrum()?;
    let s_numeric = entropy_from_spectrum(&spectrum);
    let s_half = entropy_half_rapidity_form(eta);
    let s_schmidt = entropy_schmidt_closed_form(eta);
    Ok(EntropyReport {
        eta,
        s_numeric,
        s_half_rapidity_form: s_half,
        s_schmidt_closed_form: s_schmidt,
        s_differential_marginal: differential_entropy_marginal(eta),
        matched_form: EntropyMatch::classify(s_numeric, s_half, s_schmidt),
        match_tolerance: tolerances::ENTROPY_MATCH,
        trace,
        purity: kernel.purity(),
        spectrum: spectrum.into_iter().take(REPORTED_SPECTRUM).collect(),
    })
}
