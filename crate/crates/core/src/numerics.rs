//! Quadrature, Fourier transforms by quadrature, finite differences and a
//! symmetric eigensolver.
//!
//! Everything here is deterministic: sums run in a fixed order and no work is
//! split across threads, so repeated calls return bit-identical results.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;
use crate::wavefunction::hermite_functions;

/// Uniform grid `min..=max` with `points` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidGrid(format!("bounds must be finite: [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidGrid(format!("min {min} must be below max {max}")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {points}")));
        }
        Ok(GridSpec { min, max, points })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, points: usize) -> Result<Self> {
        GridSpec::new(-half_width, half_width, points)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        // Anchor the last node exactly on `max`.
        if i + 1 == self.points {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Same interval with twice the resolution; every old node is kept.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    /// True when the grid reaches at least `half_width` on both sides of zero.
    pub fn covers(&self, half_width: f64) -> bool {
        self.min <= -half_width && self.max >= half_width
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// Parses `min:max:points`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidGrid(format!("expected min:max:points, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        GridSpec::new(min, max, points)
    }
}

/// Trapezoid weights for `grid`.
pub fn trapezoid_weights(grid: &GridSpec) -> Vec<f64> {
    let h = grid.spacing();
    let mut w = vec![h; grid.points];
    w[0] = 0.5 * h;
    w[grid.points - 1] = 0.5 * h;
    w
}

/// Trapezoid sum of samples taken on `grid`.
pub fn trapezoid(grid: &GridSpec, values: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), grid.points);
    let h = grid.spacing();
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Trapezoid,
    /// Gauss–Hermite nodes with the e^{x²} factor folded into the weights, so
    /// the rule integrates plain `f` over the whole real line, centered on the
    /// domain midpoint.
    GaussHermiteWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scheme: Scheme,
}

impl QuadratureRule {
    pub fn trapezoid(min: f64, max: f64, points: usize) -> Result<Self> {
        GridSpec::new(min, max, points)?;
        Ok(QuadratureRule {
            min,
            max,
            points,
            scheme: Scheme::Trapezoid,
        })
    }

    pub fn gauss_hermite(min: f64, max: f64, points: usize) -> Result<Self> {
        GridSpec::new(min, max, points)?;
        Ok(QuadratureRule {
            min,
            max,
            points,
            scheme: Scheme::GaussHermiteWeighted,
        })
    }

    fn refined(&self) -> QuadratureRule {
        let points = match self.scheme {
            Scheme::Trapezoid => 2 * self.points - 1,
            Scheme::GaussHermiteWeighted => 2 * self.points,
        };
        QuadratureRule { points, ..*self }
    }

    /// Nodes and positive weights of the rule.
    pub fn nodes_weights(&self) -> (Vec<f64>, Vec<f64>) {
        match self.scheme {
            Scheme::Trapezoid => {
                let grid = GridSpec {
                    min: self.min,
                    max: self.max,
                    points: self.points,
                };
                (grid.nodes(), trapezoid_weights(&grid))
            }
            Scheme::GaussHermiteWeighted => {
                let center = 0.5 * (self.min + self.max);
                let (x, w) = gauss_hermite(self.points);
                (x.into_iter().map(|x| x + center).collect(), w)
            }
        }
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (x, w) = self.nodes_weights();
        x.iter().zip(&w).map(|(&x, &w)| w * f(x)).sum()
    }
}

const MAX_REFINEMENTS: usize = 3;

/// Integrates `f` with `rule`, doubling the resolution until two successive
/// estimates agree to 1e-8. Fails after three refinements.
pub fn integrate_1d(f: impl Fn(f64) -> f64, rule: &QuadratureRule) -> Result<f64> {
    let mut rule = *rule;
    let mut estimate = rule.apply(&f);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        rule = rule.refined();
        let next = rule.apply(&f);
        change = (next - estimate).abs();
        estimate = next;
        if change < tolerances::QUADRATURE_REFINEMENT {
            return Ok(estimate);
        }
    }
    Err(Error::NonConvergence {
        refinements: MAX_REFINEMENTS,
        change,
    })
}

/// `n`-point Gauss–Hermite rule for ∫ f(x) dx over the real line.
///
/// Roots of the orthonormal Hermite function h_n are found by Newton iteration
/// from the usual asymptotic guesses; the weights are the Christoffel numbers
/// 1 / Σ_{k<n} h_k(x)², which already include the e^{x²} factor.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut roots = vec![0.0; m];
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        for _ in 0..100 {
            let h = hermite_functions(n, z);
            let deriv = (2.0 * nf).sqrt() * h[n - 1] - z * h[n];
            let dz = h[n] / deriv;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        roots[i] = z;
    }

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let weight = |x: f64| {
        let h = hermite_functions(n - 1, x);
        1.0 / h.iter().map(|v| v * v).sum::<f64>()
    };
    for &r in &roots {
        nodes.push(-r);
        weights.push(weight(r));
    }
    // for odd n the last root is the zero node, already pushed
    let positive = if n % 2 == 1 { &roots[..m - 1] } else { &roots[..] };
    for &r in positive.iter().rev() {
        nodes.push(r);
        weights.push(weight(r));
    }
    (nodes, weights)
}

/// Sign pair (s_z, s_t) in the kernel exp(i s_z q_z z + i s_t q_0 t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FourierConvention {
    pub s_z: i8,
    pub s_t: i8,
}

impl FourierConvention {
    pub const ALL: [FourierConvention; 4] = [
        FourierConvention { s_z: -1, s_t: 1 },
        FourierConvention { s_z: 1, s_t: -1 },
        FourierConvention { s_z: 1, s_t: 1 },
        FourierConvention { s_z: -1, s_t: -1 },
    ];

    pub fn new(s_z: i8, s_t: i8) -> Result<Self> {
        if s_z.abs() != 1 || s_t.abs() != 1 {
            return Err(Error::Domain(format!("signs must be ±1, got ({s_z}, {s_t})")));
        }
        Ok(FourierConvention { s_z, s_t })
    }
}

impl std::fmt::Display for FourierConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:+}, {:+})", self.s_z, self.s_t)
    }
}

/// Complex field sampled on a square (q_z, q_0) grid. Storage is q_0-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    pub q_grid: GridSpec,
    pub convention: FourierConvention,
    values: Vec<Complex64>,
}

impl FourierField {
    pub fn get(&self, i_qz: usize, i_q0: usize) -> Complex64 {
        self.values[i_q0 * self.q_grid.points + i_qz]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// ∬ |φ|² dq_z dq_0 by the trapezoid rule on the sample grid.
    pub fn norm_squared(&self) -> f64 {
        let w = trapezoid_weights(&self.q_grid);
        let n = self.q_grid.points;
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                total += w[i] * w[j] * self.values[j * n + i].norm_sqr();
            }
        }
        total
    }
}

/// φ(q_z, q_0) = (1/2π) ∬ ψ(z, t) exp(i s_z q_z z + i s_t q_0 t) dz dt.
///
/// `grid` is the integration grid (both axes); `q_grid` is where φ is sampled.
/// The kernel factorizes, so the double sum is evaluated as two matrix products.
pub fn fourier_2d(
    psi: impl Fn(f64, f64) -> f64,
    grid: &GridSpec,
    q_grid: &GridSpec,
    convention: FourierConvention,
) -> Result<FourierField> {
    let n = grid.points;
    let x = grid.nodes();
    let w = trapezoid_weights(grid);

    // samples[(i_z, j_t)] weighted by w_i w_j
    let mut boundary = 0.0f64;
    let samples = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let value = psi(x[i], x[j]);
        if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
            boundary = boundary.max(value.abs());
        }
        Complex64::new(w[i] * w[j] * value, 0.0)
    });
    if boundary >= tolerances::FOURIER_BOUNDARY {
        return Err(Error::BoundaryDecay(boundary));
    }

    let q = q_grid.nodes();
    let phase = |sign: i8| {
        DMatrix::<Complex64>::from_fn(q.len(), n, |a, i| {
            Complex64::from_polar(1.0, f64::from(sign) * q[a] * x[i])
        })
    };
    let ez = phase(convention.s_z);
    let et = phase(convention.s_t);
    // field[(a, b)] = Σ_ij ez[a,i] samples[i,j] et[b,j]
    let field = &ez * &samples * et.transpose() * Complex64::new(1.0 / (2.0 * PI), 0.0);

    let m = q.len();
    let mut values = Vec::with_capacity(m * m);
    for b in 0..m {
        for a in 0..m {
            values.push(field[(a, b)]);
        }
    }
    Ok(FourierField {
        q_grid: *q_grid,
        convention,
        values,
    })
}

/// Central second difference (f(x+h) − 2f(x) + f(x−h)) / h².
pub fn second_derivative(f: impl Fn(f64) -> f64, x: f64, step: f64) -> f64 {
    (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step)
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Sorted in descending order.
    pub values: DVector<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: DMatrix<f64>,
}

const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Decomposes a symmetric matrix. Asymmetry up to 1e-10 (relative to the
/// largest entry) is removed by symmetrizing; anything larger is rejected.
pub fn symmetric_eigen(matrix: &DMatrix<f64>) -> Result<SymmetricEigen> {
    if !matrix.is_square() {
        return Err(Error::Domain(format!(
            "matrix must be square, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let scale = matrix.amax().max(f64::MIN_POSITIVE);
    let asymmetry = (matrix - matrix.transpose()).amax();
    if asymmetry > tolerances::SYMMETRY * scale.max(1.0) {
        return Err(Error::NotSymmetric(asymmetry));
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITERATIONS)
        .ok_or(Error::EigenConvergence {
            iterations: EIGEN_MAX_ITERATIONS,
        })?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(matrix.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok(SymmetricEigen { values, vectors })
}
