// SPDX-License-Identifier: Apache-2.0

//! Named states and the measured truncated correlation matrix shipped with
//! the toolkit.

use crate::dqc1::{jones_unitary, Dqc1Instance};
use crate::error::{Error, Result};
use crate::linalg::{c64, RMatrix};
use crate::pauli::{Pauli, PauliLabel};
use crate::state::DensityMatrix;
use crate::witness::CorrelationMatrix;

/// Measured 4x4 truncated correlation matrix of the final one-clean-qubit
/// state (columns `III, IZI, IIZ, IZZ`), with its one-sigma uncertainties.
pub const RTRUNC_JSON: &str = include_str!("../../../fixtures/rtrunc_eq3.json");

pub const NAMED_STATES: [&str; 4] = ["bell", "product-fixture", "initial-dqc1", "final-dqc1"];

pub fn rtrunc() -> CorrelationMatrix {
    CorrelationMatrix::from_json(RTRUNC_JSON).expect("bundled fixture is valid")
}

/// `(|00> + |11>)/√2`.
pub fn bell() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(&[c64(s, 0.), c64(0., 0.), c64(0., 0.), c64(s, 0.)], vec![1, 1]).expect("valid pure state")
}

/// Product of a qubit state and a correlated two-qubit state; zero discord
/// and zero mutual information.
pub fn product_fixture() -> DensityMatrix {
    let p = |s: &str| s.parse::<PauliLabel>().expect("static label");
    let a = DensityMatrix::from_pauli_coefficients(&[(p("I"), 1.0), (p("X"), 0.3), (p("Z"), 0.4)], vec![1])
        .expect("valid qubit state");
    let b = DensityMatrix::from_pauli_coefficients(&[(p("II"), 1.0), (p("XZ"), 0.3), (p("IY"), 0.2)], vec![2])
        .expect("valid two-qubit state");
    a.tensor(&b)
}

/// Pseudopure input of the four-qubit circuit: `|0><0| ⊗ I/8`.
pub fn initial_dqc1() -> DensityMatrix {
    Dqc1Instance::new(1.0, jones_unitary()).expect("Jones unitary is valid").input_state()
}

/// Pseudopure output of the four-qubit circuit with the Jones unitary.
pub fn final_dqc1() -> DensityMatrix {
    Dqc1Instance::new(1.0, jones_unitary()).expect("Jones unitary is valid").output_state()
}

pub fn named_state(name: &str) -> Result<DensityMatrix> {
    match name {
        "bell" => Ok(bell()),
        "product-fixture" | "product" => Ok(product_fixture()),
        "initial-dqc1" => Ok(initial_dqc1()),
        "final-dqc1" => Ok(final_dqc1()),
        other => {
            Err(Error::InvalidInput(format!("unknown state {other:?}; expected one of {}", NAMED_STATES.join(", "))))
        }
    }
}

/// Uncertainty template read off the measured truncated matrix, for emulating
/// measurements of a full correlation matrix: rows `I` and `Z` carry 0.007,
/// rows `X` and `Y` 0.05, the `(Z, I..I)` entry 0.04 and the `(I, I..I)`
/// entry none.
pub fn measured_scale_sigma(row: &PauliLabel, col: &PauliLabel) -> f64 {
    let single = row.num_qubits() == 1;
    let first = row.symbols().first().copied();
    match (single, first) {
        _ if row.is_identity() && col.is_identity() => 0.0,
        (true, Some(Pauli::Z)) if col.is_identity() => 0.04,
        (true, Some(Pauli::X | Pauli::Y)) => 0.05,
        _ => 0.007,
    }
}

pub fn measured_scale_sigmas(rows: &[PauliLabel], cols: &[PauliLabel]) -> RMatrix {
    RMatrix::from_fn(rows.len(), cols.len(), |i, j| measured_scale_sigma(&rows[i], &cols[j]))
}
