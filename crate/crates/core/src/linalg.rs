// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra shared by the simulation, discord and
//! witness modules.
//!
//! Qubit ordering: qubit 0 is the most significant tensor factor, i.e. the
//! leftmost symbol of a Pauli label and the top wire of a circuit diagram.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

/// Eigenvalues in `[-NEGATIVE_EIGEN_TOL, 0)` are treated as numerical noise.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

pub(crate) const HERMITIAN_INPUT_TOL: f64 = 1e-10;

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Largest entry-wise deviation `max |m - m†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry-wise deviation of `u† u` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    let n = prod.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - c64(target, 0.0)).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

/// Real eigenvalues of a Hermitian matrix, sorted in descending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("eigenvalues need a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(eigenvalues_unchecked(m))
}

pub(crate) fn eigenvalues_unchecked(m: &CMatrix) -> Vec<f64> {
    let mut eigs: Vec<f64> = match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => eigen_2x2(m).to_vec(),
        _ => SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect(),
    };
    eigs.sort_by(|a, b| b.total_cmp(a));
    eigs
}

fn eigen_2x2(m: &CMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + half_gap, mean - half_gap]
}

/// Shannon entropy in bits of a spectrum, with `0 log 0 = 0`.
///
/// Values are clipped to `[0, 1]`; validity of the spectrum is the caller's
/// concern.
pub fn entropy_bits(eigs: &[f64]) -> f64 {
    eigs.iter().map(|&l| l.clamp(0.0, 1.0)).filter(|&l| l > 0.0).map(|l| -l * l.log2()).sum()
}

/// Entropy in bits of an (unnormalized) positive operator scaled by `1/weight`.
pub(crate) fn entropy_of_scaled(m: &CMatrix, weight: f64) -> f64 {
    let eigs: Vec<f64> = eigenvalues_unchecked(m).into_iter().map(|l| l / weight).collect();
    entropy_bits(&eigs)
}

/// Singular values of a real matrix in descending order.
pub fn singular_values(m: &RMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Partial trace of an `n_qubits`-qubit operator keeping the listed qubits.
///
/// `keep` is interpreted as a set; the kept qubits stay in ascending order.
pub fn partial_trace_qubits(m: &CMatrix, n_qubits: usize, keep: &[usize]) -> Result<CMatrix> {
    let dim = 1usize << n_qubits;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Dimension(format!(
            "expected a {dim}x{dim} operator for {n_qubits} qubits, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::InvalidInput(format!("qubit index {bad} out of range for {n_qubits} qubits")));
    }
    let traced: Vec<usize> = (0..n_qubits).filter(|q| !kept.contains(q)).collect();

    // Full register index from (kept index, traced index).
    let spread = |sub: usize, qubits: &[usize]| -> usize {
        let k = qubits.len();
        qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            let bit = (sub >> (k - 1 - pos)) & 1;
            acc | (bit << (n_qubits - 1 - q))
        })
    };
    let kept_idx: Vec<usize> = (0..1usize << kept.len()).map(|a| spread(a, &kept)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len()).map(|t| spread(t, &traced)).collect();

    let dk = kept_idx.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (a, &ia) in kept_idx.iter().enumerate() {
        for (b, &ib) in kept_idx.iter().enumerate() {
            out[(a, b)] = traced_idx.iter().map(|&t| m[(ia | t, ib | t)]).sum();
        }
    }
    Ok(out)
}

/// Partial transpose of a `dim_a * dim_b` operator on the first factor.
pub fn partial_transpose_first(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim_a * dim_b, dim_a * dim_b);
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    out[(j * dim_b + k, i * dim_b + l)] = m[(i * dim_b + k, j * dim_b + l)];
                }
            }
        }
    }
    out
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
    }

    fn pauli_z() -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c64(1., 0.), c64(-1., 0.)]))
    }

    #[test]
    fn kronecker_of_identities_and_diagonals() {
        assert_eq!(tensor(&identity(2), &identity(2)), identity(4));
        let zz = tensor(&pauli_z(), &pauli_z());
        let expect = [1.0, -1.0, -1.0, 1.0];
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert_eq!(zz[(i, j)], c64(e, 0.0));
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let mixed = identity(4) * c64(0.25, 0.0);
        assert_eq!(hermitian_eigenvalues(&mixed).unwrap(), vec![0.25; 4]);
        let z = hermitian_eigenvalues(&pauli_z()).unwrap();
        assert_abs_diff_eq!(z[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z[1], -1.0, epsilon = 1e-15);
        let m = (identity(2) + pauli_x() * c64(0.5, 0.0)) * c64(0.5, 0.0);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(e[0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let mut m = identity(3);
        m[(0, 2)] = c64(0.3, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn singular_value_examples() {
        assert_eq!(singular_values(&RMatrix::identity(4, 4)), vec![1.0; 4]);
        assert_eq!(singular_values(&RMatrix::zeros(4, 4)), vec![0.0; 4]);
    }

    #[test]
    fn entropy_clips_and_ignores_zeros() {
        assert_eq!(entropy_bits(&[1.0, 0.0, -1e-12]), 0.0);
        assert_abs_diff_eq!(entropy_bits(&[0.5, 0.5]), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_qubit() {
        let m = identity(4);
        assert!(partial_trace_qubits(&m, 2, &[2]).is_err());
        assert!(partial_trace_qubits(&m, 3, &[0]).is_err());
    }

    #[test]
    fn partial_trace_of_product_keeps_factor_order() {
        let a = (identity(2) + pauli_x() * c64(0.3, 0.0)) * c64(0.5, 0.0);
        let b = (identity(2) + pauli_z() * c64(-0.2, 0.0)) * c64(0.5, 0.0);
        let c = identity(2) * c64(0.5, 0.0);
        let abc = tensor(&tensor(&a, &b), &c);
        let kept = partial_trace_qubits(&abc, 3, &[2, 0]).unwrap();
        assert!((kept - tensor(&a, &c)).norm() < 1e-15);
        let mid = partial_trace_qubits(&abc, 3, &[1]).unwrap();
        assert!((mid - b).norm() < 1e-15);
    }
}
