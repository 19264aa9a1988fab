// SPDX-License-Identifier: Apache-2.0

//! Non-zero-discord witness from the correlation matrix
//! `r_nm = Tr(ρ (A_n ⊗ B_m))`: a rank larger than `dim(A)` certifies
//! `D(A:B) > 0`. Rank lower bounds come from singular values, with Monte
//! Carlo propagation of per-element measurement uncertainties.

mod correlation;
mod montecarlo;
mod procedure;

pub use correlation::{correlation_matrix, CorrelationJson, CorrelationMatrix};
pub use montecarlo::{
    column_combination_scan, monte_carlo_svd, Histogram, SingularValueDistribution, DEFAULT_BIN_WIDTH,
};
pub use procedure::{
    default_tau, rank_from_distribution, scan_verdict, witness_procedure, ColumnPolicy, ColumnSource, FnColumnSource,
    MatrixSource, MeasuredColumn, Outcome, RankEstimate, StateSource, WitnessOptions, WitnessRun, WitnessVerdict,
};
