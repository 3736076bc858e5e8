//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("time step must be positive, got {0}")]
    NonPositiveDtau(f64),

    #[error("singular pentadiagonal elimination at row {row} (pivot {pivot:.3e}, threshold {threshold:.3e}); reduce the time step")]
    SingularPivot {
        row: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("wavefunctions live on different grids")]
    GridMismatch,

    #[error("operation requires a normalized wavefunction")]
    Unnormalized,

    #[error("state collapsed: norm^2 = {norm_sq:.3e} (trial function lies in the span of the deflated states; perturb the trial function)")]
    Collapse { norm_sq: f64 },

    #[error("eigenvalue iteration failed to converge: {0}")]
    EigenFailure(String),

    #[error("state {index}: {source}")]
    State {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the spectrum index it occurred at.
    pub fn for_state(self, index: usize) -> Error {
        Error::State {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
