// SPDX-License-Identifier: Apache-2.0

//! Inputs shared by the benchmarks.

use dqc1kit::{fixtures, jones_unitary, CorrelationMatrix, DensityMatrix, Dqc1Instance};

/// Output of the four-qubit circuit with the Jones unitary at bias `eps`.
pub fn jones_output(eps: f64) -> DensityMatrix {
    Dqc1Instance::new(eps, jones_unitary()).expect("valid instance").output_state()
}

pub fn truncated_matrix() -> CorrelationMatrix {
    fixtures::rtrunc()
}
