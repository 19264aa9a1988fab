// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, singular_values, CMatrix, RMatrix};
use crate::pauli::PauliLabel;
use crate::state::DensityMatrix;

const IDENTITY_ENTRY_TOL: f64 = 1e-12;

/// Real correlation matrix with optional one-sigma uncertainties. Rows are
/// labelled by Pauli strings on `A`, columns by Pauli strings on `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    rows: Vec<PauliLabel>,
    cols: Vec<PauliLabel>,
    values: RMatrix,
    sigmas: Option<RMatrix>,
}

impl CorrelationMatrix {
    pub fn new(
        rows: Vec<PauliLabel>,
        cols: Vec<PauliLabel>,
        mut values: RMatrix,
        sigmas: Option<RMatrix>,
    ) -> Result<Self> {
        let shape = (rows.len(), cols.len());
        if values.shape() != shape {
            return Err(Error::Dimension(format!("values are {:?} but labels give {shape:?}", values.shape())));
        }
        if let Some(s) = &sigmas {
            if s.shape() != shape {
                return Err(Error::Dimension(format!("sigmas are {:?}, values {shape:?}", s.shape())));
            }
            if s.iter().any(|&x| x.is_nan() || x < 0.0) {
                return Err(Error::InvalidInput("sigmas must be non-negative".into()));
            }
        }
        let width = |labels: &[PauliLabel]| labels.first().map(PauliLabel::num_qubits);
        if rows.iter().any(|l| Some(l.num_qubits()) != width(&rows))
            || cols.iter().any(|l| Some(l.num_qubits()) != width(&cols))
        {
            return Err(Error::InvalidInput("labels on one side must share a length".into()));
        }
        let ri = rows.iter().position(PauliLabel::is_identity);
        let ci = cols.iter().position(PauliLabel::is_identity);
        if let (Some(i), Some(j)) = (ri, ci) {
            if (values[(i, j)] - 1.0).abs() > IDENTITY_ENTRY_TOL {
                return Err(Error::InvalidInput(format!(
                    "identity entry must be 1 (unit trace), got {}",
                    values[(i, j)]
                )));
            }
            if sigmas.as_ref().is_some_and(|s| s[(i, j)] != 0.0) {
                return Err(Error::InvalidInput("identity entry must carry no uncertainty".into()));
            }
            values[(i, j)] = 1.0;
        }
        Ok(CorrelationMatrix { rows, cols, values, sigmas })
    }

    pub fn rows(&self) -> &[PauliLabel] {
        &self.rows
    }

    pub fn cols(&self) -> &[PauliLabel] {
        &self.cols
    }

    pub fn values(&self) -> &RMatrix {
        &self.values
    }

    pub fn sigmas(&self) -> Option<&RMatrix> {
        self.sigmas.as_ref()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    pub fn with_sigmas(self, sigmas: Option<RMatrix>) -> Result<Self> {
        Self::new(self.rows, self.cols, self.values, sigmas)
    }

    pub fn column_index(&self, label: &PauliLabel) -> Option<usize> {
        self.cols.iter().position(|c| c == label)
    }

    /// Sub-matrix on the given columns, in the given order.
    pub fn extract_columns(&self, labels: &[PauliLabel]) -> Result<CorrelationMatrix> {
        let idx = labels
            .iter()
            .map(|l| self.column_index(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.select_columns(&idx))
    }

    pub(crate) fn select_columns(&self, idx: &[usize]) -> CorrelationMatrix {
        let values = self.values.select_columns(idx);
        let sigmas = self.sigmas.as_ref().map(|s| s.select_columns(idx));
        CorrelationMatrix {
            rows: self.rows.clone(),
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
            values,
            sigmas,
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.values)
    }

    /// Number of singular values strictly above `tau`.
    pub fn rank_lower_bound(&self, tau: f64) -> usize {
        self.singular_values().iter().filter(|&&s| s > tau).count()
    }

    /// `2^{-N} Σ_{nm} r_nm A_n ⊗ B_m`.
    pub fn reconstruct(&self) -> Result<CMatrix> {
        let na = self.rows.first().map_or(0, PauliLabel::num_qubits);
        let nb = self.cols.first().map_or(0, PauliLabel::num_qubits);
        let dim = 1usize << (na + nb);
        let mut m = CMatrix::zeros(dim, dim);
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.cols.iter().enumerate() {
                let v = self.values[(i, j)];
                if v != 0.0 {
                    m += a.concat(b).realize()? * c64(v / dim as f64, 0.0);
                }
            }
        }
        Ok(m)
    }

    pub fn to_json_value(&self) -> CorrelationJson {
        let rows = |m: &RMatrix| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        CorrelationJson {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            values: rows(&self.values),
            sigmas: self.sigmas.as_ref().map(rows),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<CorrelationJson>(text)?.into_matrix()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_value())?)
    }
}

/// File format: `{"rows": [..], "cols": [..], "values": [[..]], "sigmas": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrelationJson {
    pub rows: Vec<PauliLabel>,
    pub cols: Vec<PauliLabel>,
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<Vec<f64>>>,
}

impl CorrelationJson {
    pub fn into_matrix(self) -> Result<CorrelationMatrix> {
        let to_matrix = |data: &[Vec<f64>], what: &str| -> Result<RMatrix> {
            let nr = self.rows.len();
            let nc = self.cols.len();
            if data.len() != nr || data.iter().any(|r| r.len() != nc) {
                return Err(Error::Dimension(format!("{what} must be {nr}x{nc}")));
            }
            Ok(RMatrix::from_fn(nr, nc, |i, j| data[i][j]))
        };
        let values = to_matrix(&self.values, "values")?;
        let sigmas = self.sigmas.as_deref().map(|s| to_matrix(s, "sigmas")).transpose()?;
        CorrelationMatrix::new(self.rows, self.cols, values, sigmas)
    }
}

/// Full correlation matrix of `ρ` for the split `dims = (dim A, dim B)`.
pub fn correlation_matrix(rho: &DensityMatrix, dims: (usize, usize)) -> Result<CorrelationMatrix> {
    let (da, db) = dims;
    if !da.is_power_of_two() || !db.is_power_of_two() || da < 2 || db < 2 || da * db != rho.dim() {
        return Err(Error::Dimension(format!(
            "dims {da}x{db} are not a qubit split of a {}-dimensional state",
            rho.dim()
        )));
    }
    let rows = PauliLabel::all(da.trailing_zeros() as usize);
    let cols = PauliLabel::all(db.trailing_zeros() as usize);
    let mut values = RMatrix::zeros(rows.len(), cols.len());
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in cols.iter().enumerate() {
            values[(i, j)] = rho.expectation(&a.concat(b))?;
        }
    }
    values[(0, 0)] = 1.0;
    CorrelationMatrix::new(rows, cols, values, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::frobenius_norm;

    #[test]
    fn maximally_mixed_has_only_identity_entry() {
        let r = correlation_matrix(&DensityMatrix::maximally_mixed(2), (2, 2)).unwrap();
        for ((i, j), v) in r.values().iter().enumerate().map(|(k, v)| ((k % 4, k / 4), v)) {
            let expect = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-15);
        }
        assert_eq!(r.rank_lower_bound(1e-9), 1);
    }

    #[test]
    fn bell_correlations() {
        let r = correlation_matrix(&fixtures::bell(), (2, 2)).unwrap();
        let nonzero: Vec<(String, String, f64)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| r.values()[(i, j)].abs() > 1e-12)
            .map(|(i, j)| (r.rows()[i].to_string(), r.cols()[j].to_string(), r.values()[(i, j)]))
            .collect();
        let expect = [("I", "I", 1.0), ("X", "X", 1.0), ("Y", "Y", -1.0), ("Z", "Z", 1.0)];
        assert_eq!(nonzero.len(), expect.len());
        for ((a, b, v), (ea, eb, ev)) in nonzero.iter().zip(expect) {
            assert_eq!((a.as_str(), b.as_str()), (ea, eb));
            assert!((v - ev).abs() < 1e-14);
        }
        assert_eq!(r.rank_lower_bound(1e-9), 4);
    }

    #[test]
    fn reconstruction_round_trip() {
        let rho = fixtures::final_dqc1();
        let r = correlation_matrix(&rho, (2, 8)).unwrap();
        assert!(frobenius_norm(&(r.reconstruct().unwrap() - rho.entries())) < 1e-12);
    }

    #[test]
    fn extract_columns_contract() {
        let rho = fixtures::final_dqc1();
        let r = correlation_matrix(&rho, (2, 8)).unwrap();
        assert_eq!(r.extract_columns(r.cols()).unwrap(), r);
        let one = r.extract_columns(&["IZI".parse().unwrap()]).unwrap();
        assert_eq!(one.shape(), (4, 1));
        assert!(one.rank_lower_bound(1e-12) <= 1);
        assert!(matches!(r.extract_columns(&["XX".parse().unwrap()]), Err(Error::UnknownLabel(_))));
        let four: Vec<PauliLabel> = ["III", "IZI", "IIZ", "IZZ"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(r.extract_columns(&four).unwrap().shape(), (4, 4));
    }

    #[test]
    fn identity_entry_is_enforced() {
        let labels = |s: &[&str]| s.iter().map(|x| x.parse().unwrap()).collect::<Vec<PauliLabel>>();
        let bad = CorrelationMatrix::new(labels(&["I", "Z"]), labels(&["I"]), RMatrix::from_element(2, 1, 0.9), None);
        assert!(bad.is_err());
        let sig = CorrelationMatrix::new(
            labels(&["I", "Z"]),
            labels(&["I"]),
            RMatrix::from_column_slice(2, 1, &[1.0, 0.2]),
            Some(RMatrix::from_element(2, 1, 0.1)),
        );
        assert!(sig.is_err());
        let shape = CorrelationMatrix::new(labels(&["I"]), labels(&["I", "Z"]), RMatrix::zeros(1, 1), None);
        assert!(shape.is_err());
    }

    #[test]
    fn fixture_json_parses_and_round_trips() {
        let r = fixtures::rtrunc();
        assert_eq!(r.shape(), (4, 4));
        assert_eq!(r.cols()[1].to_string(), "IZI");
        // (X, IIZ) entry
        assert_eq!(r.values()[(1, 2)], -0.13);
        let back = CorrelationMatrix::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
