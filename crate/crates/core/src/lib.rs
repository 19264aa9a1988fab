// SPDX-License-Identifier: Apache-2.0

//! Simulation and analysis of non-classical correlations in mixed-state
//! quantum computation.
//!
//! - [`dqc1`]: the one-clean-qubit circuit and its trace readout.
//! - [`discord`]: quantum discord with projective measurements on a qubit,
//!   and the dephasing-invariance test for zero discord.
//! - [`witness`]: the correlation-matrix rank witness with Monte Carlo
//!   uncertainty propagation.
//! - [`nmr`]: polarization, pseudopure embedding and measurement emulation.
//!
//! Qubit 0 is the most significant tensor factor everywhere; entropies are
//! in bits.

pub mod discord;
pub mod dqc1;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod minimize;
pub mod nmr;
pub mod pauli;
pub mod random;
pub mod state;
pub mod witness;

pub use discord::{
    conditional_state, discord, discord_at_small_polarization, haar_survey, is_zero_discord, mutual_information,
    projective_average, DiscordResult, ExtrapolatedDiscord, MeasurementBasis,
};
pub use dqc1::{haar_random_unitary, jones_unitary, Dqc1Instance};
pub use error::{Error, Result};
pub use linalg::{CMatrix, RMatrix, C64};
pub use minimize::MinimizerOptions;
pub use nmr::{boltzmann_polarization, embed, simulate_measurement, verdict_polarization_invariance, NmrEnsemble};
pub use pauli::{Pauli, PauliLabel};
pub use state::DensityMatrix;
pub use witness::{
    column_combination_scan, correlation_matrix, monte_carlo_svd, scan_verdict, witness_procedure, CorrelationMatrix,
    Outcome, SingularValueDistribution, WitnessOptions, WitnessVerdict,
};
