use thiserror::Error;

/// Errors raised by the four-level solver and its helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: xi0 = {xi0} must be positive")]
    DegenerateInput { xi0: f64 },

    #[error("not invertible as a ladder: |xi3|/xi0 = {ratio:e} exceeds tolerance {tol:e}")]
    NotLadder { ratio: f64, tol: f64 },

    #[error("invalid hopf coordinates: {0}")]
    InvalidCoordinates(String),

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    InvalidState { norm_sqr: f64 },

    /// Levels 1 and 3 are dynamically disconnected (xi1 = xi3 = 0). `a1` is
    /// still well defined and carried along; `a3` is identically zero.
    #[error("levels 1 and 3 are disconnected (xi1 = xi3 = 0)")]
    DisconnectedSector { a1: f64 },

    #[error("no dynamics: all couplings vanish")]
    NoDynamics,

    #[error("invalid odd pair: {0}")]
    InvalidPair(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

impl Error {
    /// True for errors caused by bad caller input, as opposed to numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::InvalidPair(_) | Error::InvalidState { .. } | Error::NotSymmetric { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
