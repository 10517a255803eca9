use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The grid does not reach far enough into the tails of the distribution.
    #[error("grid [{min}, {max}] does not cover ±{required} (6 standard deviations)")]
    GridTooNarrow { min: f64, max: f64, required: f64 },

    /// A computed quantity missed its tolerance.
    #[error("tolerance failure in {what}: observed {observed:e}, limit {limit:e}")]
    Tolerance {
        what: String,
        observed: f64,
        limit: f64,
    },

    #[error("quadrature did not converge after {refinements} refinements (last change {change:e})")]
    NonConvergence { refinements: usize, change: f64 },

    #[error("eigensolver did not converge within {iterations} iterations")]
    EigenConvergence { iterations: usize },

    #[error("matrix is not symmetric: max |A - Aᵀ| = {0:e}")]
    NotSymmetric(f64),

    #[error("density kernel has a negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    /// The integrand is still significant on the integration boundary.
    #[error("integrand does not decay at the grid boundary: max |f| = {0:e}")]
    BoundaryDecay(f64),
}

impl Error {
    pub(crate) fn tolerance(what: impl Into<String>, observed: f64, limit: f64) -> Self {
        Error::Tolerance {
            what: what.into(),
            observed,
            limit,
        }
    }

    /// True for failures of a numerical check, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Domain(_) | Error::InvalidGrid(_) | Error::GridTooNarrow { .. }
        )
    }
}
