// SPDX-License-Identifier: Apache-2.0

//! Tensor-product Pauli strings such as `"XIIZ"`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, C64};

/// Largest register a label may be realized on.
pub const MAX_LABEL_QUBITS: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_symbol(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::PauliSymbol(other)),
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Entry `P[b, b ^ flip]` for row bit `b`.
    fn phase(self, bit: usize) -> C64 {
        match (self, bit) {
            (Pauli::I, _) | (Pauli::X, _) | (Pauli::Z, 0) => c64(1.0, 0.0),
            (Pauli::Z, _) => c64(-1.0, 0.0),
            (Pauli::Y, 0) => c64(0.0, -1.0),
            (Pauli::Y, _) => c64(0.0, 1.0),
        }
    }

    /// The 2x2 matrix.
    pub fn matrix(self) -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        let flip = usize::from(self.flips());
        for row in 0..2 {
            m[(row, row ^ flip)] = self.phase(row);
        }
        m
    }
}

/// A Pauli string; symbol 0 acts on the most significant qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliLabel(Vec<Pauli>);

impl PauliLabel {
    pub fn new(symbols: Vec<Pauli>) -> Self {
        PauliLabel(symbols)
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliLabel(vec![Pauli::I; n_qubits])
    }

    /// All `4^n` labels in lexicographic order with `I < X < Y < Z`.
    pub fn all(n_qubits: usize) -> Vec<PauliLabel> {
        (0..4usize.pow(n_qubits as u32))
            .map(|mut k| {
                let mut symbols = vec![Pauli::I; n_qubits];
                for slot in symbols.iter_mut().rev() {
                    *slot = Pauli::ALL[k % 4];
                    k /= 4;
                }
                PauliLabel(symbols)
            })
            .collect()
    }

    pub fn symbols(&self) -> &[Pauli] {
        &self.0
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// `self ⊗ other`.
    pub fn concat(&self, other: &PauliLabel) -> PauliLabel {
        PauliLabel(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// Position in [`PauliLabel::all`], unique per length.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &p| acc * 4 + p as usize)
    }

    fn flip_mask(&self) -> usize {
        let n = self.0.len();
        self.0.iter().enumerate().filter(|(_, p)| p.flips()).fold(0, |acc, (q, _)| acc | 1 << (n - 1 - q))
    }

    /// Nonzero entry of row `row`: `P[row, row ^ flip_mask]`.
    fn row_phase(&self, row: usize) -> C64 {
        let n = self.0.len();
        self.0.iter().enumerate().fold(c64(1.0, 0.0), |acc, (q, p)| acc * p.phase((row >> (n - 1 - q)) & 1))
    }

    /// Dense matrix realization.
    pub fn realize(&self) -> Result<CMatrix> {
        if self.0.len() > MAX_LABEL_QUBITS {
            return Err(Error::InvalidInput(format!("label {self} exceeds {MAX_LABEL_QUBITS} qubits")));
        }
        let dim = 1usize << self.0.len();
        let mask = self.flip_mask();
        let mut m = CMatrix::zeros(dim, dim);
        for row in 0..dim {
            m[(row, row ^ mask)] = self.row_phase(row);
        }
        Ok(m)
    }

    /// `Tr(m P)` without materializing `P`.
    pub fn trace_against(&self, m: &CMatrix) -> Result<C64> {
        let dim = 1usize << self.0.len();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Dimension(format!(
                "label {self} acts on dimension {dim}, operator is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mask = self.flip_mask();
        // Tr(m P) = sum_r m[r ^ mask, r] P[r, r ^ mask]
        Ok((0..dim).map(|r| m[(r ^ mask, r)] * self.row_phase(r)).sum())
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidInput("empty Pauli label".into()));
        }
        s.chars().map(Pauli::from_symbol).collect::<Result<Vec<_>>>().map(PauliLabel)
    }
}

impl Serialize for PauliLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, tensor, trace};

    fn label(s: &str) -> PauliLabel {
        s.parse().unwrap()
    }

    #[test]
    fn realizations_match_kronecker_products() {
        assert_eq!(label("I").realize().unwrap(), identity(2));
        let xz = tensor(&Pauli::X.matrix(), &Pauli::Z.matrix());
        assert_eq!(label("XZ").realize().unwrap(), xz);
        let xii = tensor(&tensor(&Pauli::X.matrix(), &identity(2)), &identity(2));
        assert_eq!(label("XII").realize().unwrap(), xii);
        let y = Pauli::Y.matrix();
        assert_eq!(y[(0, 1)], c64(0.0, -1.0));
        assert_eq!(y[(1, 0)], c64(0.0, 1.0));
    }

    #[test]
    fn non_identity_strings_are_traceless_involutions() {
        let p = label("XIIZ").realize().unwrap();
        assert_eq!(trace(&p), c64(0.0, 0.0));
        assert_eq!(&p * &p, identity(16));
    }

    #[test]
    fn two_qubit_strings_are_orthogonal() {
        let labels = PauliLabel::all(2);
        assert_eq!(labels.len(), 16);
        let mats: Vec<CMatrix> = labels.iter().map(|l| l.realize().unwrap()).collect();
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let t = trace(&(a * b));
                let expect = if i == j { 4.0 } else { 0.0 };
                assert!((t - c64(expect, 0.0)).norm() < 1e-14, "{} {}", labels[i], labels[j]);
            }
        }
    }

    #[test]
    fn illegal_symbol_is_rejected() {
        assert!(matches!("XQ".parse::<PauliLabel>(), Err(Error::PauliSymbol('Q'))));
        assert!("".parse::<PauliLabel>().is_err());
    }

    #[test]
    fn oversized_label_is_rejected() {
        assert!(PauliLabel::identity(9).realize().is_err());
    }

    #[test]
    fn trace_against_agrees_with_dense_product() {
        let m = CMatrix::from_fn(8, 8, |i, j| c64(i as f64 - 0.5 * j as f64, (i * j) as f64 * 0.1));
        for l in PauliLabel::all(3) {
            let dense = trace(&(&m * l.realize().unwrap()));
            assert!((dense - l.trace_against(&m).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn ordering_and_index() {
        let all = PauliLabel::all(2);
        assert_eq!(all[0].to_string(), "II");
        assert_eq!(all[1].to_string(), "IX");
        assert_eq!(all[15].to_string(), "ZZ");
        for (k, l) in all.iter().enumerate() {
            assert_eq!(l.index(), k);
        }
    }
}
