// SPDX-License-Identifier: Apache-2.0

//! Validated density matrices over qubit registers.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, eigenvalues_unchecked, entropy_bits, hermitian_part, hermiticity_defect, identity, partial_trace_qubits,
    tensor, trace, CMatrix, C64, NEGATIVE_EIGEN_TOL,
};
use crate::pauli::PauliLabel;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite operator.
///
/// `qubit_partition` lists the qubit count of each subsystem block, most
/// significant block first. Blocks are what [`DensityMatrix::partial_trace`]
/// keeps or discards.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    qubit_partition: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix, qubit_partition: Vec<usize>) -> Result<Self> {
        let n_qubits: usize = qubit_partition.iter().sum();
        if qubit_partition.contains(&0) {
            return Err(Error::InvalidState("empty block in qubit partition".into()));
        }
        let dim = 1usize << n_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::Dimension(format!(
                "partition {qubit_partition:?} needs a {dim}x{dim} matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let defect = hermiticity_defect(&entries);
        if defect >= HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {defect:.3e})")));
        }
        let tr = trace(&entries);
        if (tr - c64(1.0, 0.0)).norm() >= TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let entries = hermitian_part(&entries);
        let min_eig = eigenvalues_unchecked(&entries).last().copied().unwrap_or(0.0);
        if min_eig < -NEGATIVE_EIGEN_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(DensityMatrix { entries, qubit_partition })
    }

    /// Single-block register.
    pub fn from_matrix(entries: CMatrix) -> Result<Self> {
        let dim = entries.nrows();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Dimension(format!("dimension {dim} is not a qubit register")));
        }
        Self::new(entries, vec![dim.trailing_zeros() as usize])
    }

    pub(crate) fn from_parts_unchecked(entries: CMatrix, qubit_partition: Vec<usize>) -> Self {
        DensityMatrix { entries, qubit_partition }
    }

    /// `|psi><psi|` for a (not necessarily normalized) state vector.
    pub fn from_pure(psi: &[C64], qubit_partition: Vec<usize>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = DVector::from_iterator(psi.len(), psi.iter().map(|z| z / norm));
        Self::new(&v * v.adjoint(), qubit_partition)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_parts_unchecked(identity(dim) * c64(1.0 / dim as f64, 0.0), vec![n_qubits])
    }

    /// `ρ = 2^{-N} Σ_P c_P P` from Pauli coefficients `c_P = Tr(ρ P)`.
    pub fn from_pauli_coefficients(terms: &[(PauliLabel, f64)], qubit_partition: Vec<usize>) -> Result<Self> {
        let n: usize = qubit_partition.iter().sum();
        let dim = 1usize << n;
        let mut m = CMatrix::zeros(dim, dim);
        for (label, coeff) in terms {
            if label.num_qubits() != n {
                return Err(Error::Dimension(format!("label {label} is not on {n} qubits")));
            }
            m += label.realize()? * c64(*coeff / dim as f64, 0.0);
        }
        Self::new(m, qubit_partition)
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.qubit_partition.iter().sum()
    }

    pub fn qubit_partition(&self) -> &[usize] {
        &self.qubit_partition
    }

    /// Same matrix with a different block structure over the same qubits.
    pub fn with_partition(self, qubit_partition: Vec<usize>) -> Result<Self> {
        if qubit_partition.iter().sum::<usize>() != self.n_qubits() || qubit_partition.contains(&0) {
            return Err(Error::Dimension(format!(
                "partition {qubit_partition:?} does not cover {} qubits",
                self.n_qubits()
            )));
        }
        Ok(DensityMatrix { qubit_partition, ..self })
    }

    /// `self ⊗ other`, concatenating the partitions.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut partition = self.qubit_partition.clone();
        partition.extend_from_slice(&other.qubit_partition);
        Self::from_parts_unchecked(tensor(&self.entries, &other.entries), partition)
    }

    /// Reduced state on the listed partition blocks.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut blocks = keep.to_vec();
        blocks.sort_unstable();
        blocks.dedup();
        if blocks.is_empty() {
            return Err(Error::InvalidInput("partial trace must keep at least one block".into()));
        }
        if let Some(&bad) = blocks.iter().find(|&&b| b >= self.qubit_partition.len()) {
            return Err(Error::InvalidInput(format!(
                "subsystem {bad} out of range for partition {:?}",
                self.qubit_partition
            )));
        }
        let mut offsets = Vec::with_capacity(self.qubit_partition.len());
        let mut acc = 0;
        for &q in &self.qubit_partition {
            offsets.push(acc);
            acc += q;
        }
        let qubits: Vec<usize> =
            blocks.iter().flat_map(|&b| offsets[b]..offsets[b] + self.qubit_partition[b]).collect();
        let reduced = partial_trace_qubits(&self.entries, self.n_qubits(), &qubits)?;
        let partition = blocks.iter().map(|&b| self.qubit_partition[b]).collect();
        Ok(Self::from_parts_unchecked(hermitian_part(&reduced), partition))
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_unchecked(&self.entries)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        entropy_bits(&self.eigenvalues())
    }

    /// `Tr(ρ P)`; real for Hermitian `ρ`.
    pub fn expectation(&self, label: &PauliLabel) -> Result<f64> {
        Ok(label.trace_against(&self.entries)?.re)
    }

    /// Convex mixture `(1 - w) self + w other`; partitions follow `self`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("mixing states of different dimension".into()));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidInput(format!("mixing weight {w} outside [0, 1]")));
        }
        let m = &self.entries * c64(1.0 - w, 0.0) + &other.entries * c64(w, 0.0);
        Ok(Self::from_parts_unchecked(m, self.qubit_partition.clone()))
    }

    /// Conjugation `U ρ U†` by a unitary.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension("unitary does not match state dimension".into()));
        }
        let m = u * &self.entries * u.adjoint();
        Ok(Self::from_parts_unchecked(hermitian_part(&m), self.qubit_partition.clone()))
    }
}

/// Plain JSON form: `{"re": [[..]], "im": [[..]], "partition": [..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub partition: Option<Vec<usize>>,
}

impl StateJson {
    pub fn to_state(&self) -> Result<DensityMatrix> {
        let m = crate::dqc1::matrix_from_parts(&self.re, self.im.as_deref())?;
        match &self.partition {
            Some(p) => DensityMatrix::new(m, p.clone()),
            None => DensityMatrix::from_matrix(m),
        }
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        let (re, im) = crate::dqc1::matrix_to_parts(rho.entries());
        StateJson { re, im: Some(im), partition: Some(rho.qubit_partition().to_vec()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[c64(s, 0.), c64(0., 0.), c64(0., 0.), c64(s, 0.)], vec![1, 1]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = identity(2) * c64(0.5, 0.0);
        m[(0, 1)] = c64(0.1, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());
        assert!(DensityMatrix::from_matrix(identity(2)).is_err());
        let neg = CMatrix::from_diagonal(&DVector::from_vec(vec![c64(1.5, 0.), c64(-0.5, 0.)]));
        assert!(DensityMatrix::from_matrix(neg).is_err());
        assert!(DensityMatrix::new(identity(4) * c64(0.25, 0.), vec![1]).is_err());
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let a = bell().partial_trace(&[0]).unwrap();
        assert!((a.entries() - identity(2) * c64(0.5, 0.)).norm() < 1e-15);
        assert_abs_diff_eq!(a.von_neumann_entropy(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_state_factorizes() {
        let a = DensityMatrix::from_pauli_coefficients(
            &[("I".parse().unwrap(), 1.0), ("X".parse().unwrap(), 0.4)],
            vec![1],
        )
        .unwrap();
        let b = DensityMatrix::maximally_mixed(2);
        let ab = a.tensor(&b);
        assert_eq!(ab.qubit_partition(), &[1, 2]);
        assert!((ab.partial_trace(&[0]).unwrap().entries() - a.entries()).norm() < 1e-15);
        assert!((ab.partial_trace(&[1]).unwrap().entries() - b.entries()).norm() < 1e-15);
        assert!(ab.partial_trace(&[2]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::from_pure(&[c64(1., 0.), c64(0., 0.)], vec![1]).unwrap();
        assert_abs_diff_eq!(pure.von_neumann_entropy(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(DensityMatrix::maximally_mixed(1).von_neumann_entropy(), 1.0);
        assert_abs_diff_eq!(DensityMatrix::maximally_mixed(4).von_neumann_entropy(), 4.0, epsilon = 1e-12);
    }
}
