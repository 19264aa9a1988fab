// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation of U^dagger U from I is {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("illegal Pauli symbol {0:?} (expected one of I, X, Y, Z)")]
    PauliSymbol(char),

    #[error("unknown column label {0}")]
    UnknownLabel(String),

    #[error("correlation matrix carries no uncertainties")]
    MissingSigmas,

    #[error("scaling assumption violated: fitted exponent {exponent:.4} outside [{lo}, {hi}]")]
    ScalingFit { exponent: f64, lo: f64, hi: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical assumption rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::ScalingFit { .. })
    }
}
