// SPDX-License-Identifier: Apache-2.0

//! The one-clean-qubit circuit: a polarized top qubit, `n` maximally mixed
//! qubits, a Hadamard on the top qubit and a controlled `U_n` that fires on
//! the top qubit's `|1>` state. Reading out `<X>` and `<Y>` on the top qubit
//! yields `ε Tr(U_n) / 2^n`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, identity, tensor, unitarity_defect, CMatrix, C64};
use crate::pauli::{Pauli, PauliLabel};
use crate::state::DensityMatrix;

pub const UNITARY_TOL: f64 = 1e-10;
pub const MAX_REGISTER_QUBITS: usize = 8;
pub const MAX_HAAR_DIM: usize = 256;

/// Top-qubit bias, register size and target unitary.
#[derive(Clone, Debug)]
pub struct Dqc1Instance {
    epsilon: f64,
    n: usize,
    unitary: CMatrix,
}

impl Dqc1Instance {
    pub fn new(epsilon: f64, unitary: CMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidInput(format!("bias {epsilon} outside [0, 1]")));
        }
        let dim = unitary.nrows();
        if !unitary.is_square() || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Dimension(format!(
                "unitary must be 2^n x 2^n with n >= 1, got {}x{}",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        let n = dim.trailing_zeros() as usize;
        if n + 1 > MAX_REGISTER_QUBITS {
            return Err(Error::InvalidInput(format!("{} qubits exceed the {MAX_REGISTER_QUBITS}-qubit cap", n + 1)));
        }
        let defect = unitarity_defect(&unitary);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Dqc1Instance { epsilon, n, unitary })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    fn mixed_dim(&self) -> usize {
        1 << self.n
    }

    /// `((I + εZ)/2) ⊗ I/2^n`, partitioned as top qubit | rest.
    pub fn input_state(&self) -> DensityMatrix {
        let d = self.mixed_dim();
        let top = DVector::from_vec(vec![c64(0.5 * (1.0 + self.epsilon), 0.0), c64(0.5 * (1.0 - self.epsilon), 0.0)]);
        let top = CMatrix::from_diagonal(&top);
        let rest = identity(d) * c64(1.0 / d as f64, 0.0);
        DensityMatrix::from_parts_unchecked(tensor(&top, &rest), vec![1, self.n])
    }

    /// Output state obtained by conjugating the input with `H ⊗ I` and then
    /// the controlled unitary.
    pub fn output_state(&self) -> DensityMatrix {
        let d = self.mixed_dim();
        let h = hadamard();
        let circuit = self.controlled_unitary() * tensor(&h, &identity(d));
        let m = &circuit * self.input_state().entries() * circuit.adjoint();
        DensityMatrix::from_parts_unchecked(crate::linalg::hermitian_part(&m), vec![1, self.n])
    }

    /// `2^{-(n+1)} [I ⊗ I + ε(|0><1| ⊗ U† + |1><0| ⊗ U)]`.
    pub fn output_state_closed_form(&self) -> DensityMatrix {
        let d = self.mixed_dim();
        let scale = 1.0 / (2 * d) as f64;
        let mut m = identity(2 * d) * c64(scale, 0.0);
        let off = &self.unitary * c64(self.epsilon * scale, 0.0);
        m.view_mut((d, 0), (d, d)).copy_from(&off);
        m.view_mut((0, d), (d, d)).copy_from(&off.adjoint());
        DensityMatrix::from_parts_unchecked(m, vec![1, self.n])
    }

    /// `|0><0| ⊗ I + |1><1| ⊗ U`.
    pub fn controlled_unitary(&self) -> CMatrix {
        let d = self.mixed_dim();
        let mut cu = identity(2 * d);
        cu.view_mut((d, d), (d, d)).copy_from(&self.unitary);
        cu
    }

    /// `<X ⊗ I..I> + i <Y ⊗ I..I>` on the output state.
    pub fn trace_estimate(&self) -> C64 {
        let out = self.output_state();
        let rest = PauliLabel::identity(self.n);
        let x = PauliLabel::new(vec![Pauli::X]).concat(&rest);
        let y = PauliLabel::new(vec![Pauli::Y]).concat(&rest);
        // Labels match the register by construction.
        let re = out.expectation(&x).expect("label sized to register");
        let im = out.expectation(&y).expect("label sized to register");
        c64(re, im)
    }

    /// `ε Tr(U) / 2^n`, the value the readout estimates.
    pub fn exact_normalized_trace(&self) -> C64 {
        crate::linalg::trace(&self.unitary) * c64(self.epsilon / self.mixed_dim() as f64, 0.0)
    }
}

pub fn hadamard() -> CMatrix {
    (Pauli::X.matrix() + Pauli::Z.matrix()) * c64(FRAC_1_SQRT_2, 0.0)
}

/// `diag(a, a, b, 1, a, b, 1, 1)` with `a = -(e^{-3iπ/5})^4` and
/// `b = (e^{-3iπ/5})^8`, the four-strand braid unitary used with the
/// one-clean-qubit Jones-polynomial estimate.
pub fn jones_unitary() -> CMatrix {
    let w = C64::from_polar(1.0, -3.0 * PI / 5.0);
    let a = -w.powu(4);
    let b = w.powu(8);
    let one = c64(1.0, 0.0);
    CMatrix::from_diagonal(&DVector::from_vec(vec![a, a, b, one, a, b, one, one]))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<CMatrix> {
    if dim == 0 || dim > MAX_HAAR_DIM {
        return Err(Error::InvalidInput(format!("Haar dimension {dim} outside 1..={MAX_HAAR_DIM}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(haar_with_rng(dim, &mut rng))
}

pub(crate) fn haar_with_rng<R: rand::Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c64(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Unitary file format: `{"dim": d, "re": [[..]], "im": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl UnitaryJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let m = matrix_from_parts(&self.re, Some(&self.im))?;
        if m.nrows() != self.dim {
            return Err(Error::Dimension(format!(
                "declared dim {} but matrix is {}x{}",
                self.dim,
                m.nrows(),
                m.ncols()
            )));
        }
        let defect = unitarity_defect(&m);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(m)
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let (re, im) = matrix_to_parts(m);
        UnitaryJson { dim: m.nrows(), re, im }
    }

    pub fn load(path: &Path) -> Result<CMatrix> {
        let text = std::fs::read_to_string(path)?;
        let parsed: UnitaryJson = serde_json::from_str(&text)?;
        parsed.to_matrix()
    }
}

pub(crate) fn matrix_from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<CMatrix> {
    let n = re.len();
    if n == 0 || re.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("real part must be a non-empty square array".into()));
    }
    if let Some(im) = im {
        if im.len() != n || im.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("imaginary part shape differs from real part".into()));
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c64(re[i][j], im.map_or(0.0, |im| im[i][j]))))
}

pub(crate) fn matrix_to_parts(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = |f: fn(&C64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
    (rows(|z| z.re), rows(|z| z.im))
}
