// SPDX-License-Identifier: Apache-2.0

//! Random states for sampling studies and property tests.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c64, hermitian_part, tensor, trace, CMatrix};
use crate::state::DensityMatrix;

pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    crate::dqc1::haar_with_rng(dim, rng)
}

/// `G G† / Tr(G G†)` for a `dim × rank` complex Ginibre matrix `G`.
pub fn random_density_matrix<R: Rng>(partition: Vec<usize>, rank: usize, rng: &mut R) -> DensityMatrix {
    let dim = 1usize << partition.iter().sum::<usize>();
    let g = CMatrix::from_fn(dim, rank.clamp(1, dim), |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64(re, im)
    });
    let m = &g * g.adjoint();
    let tr = trace(&m).re;
    DensityMatrix::from_parts_unchecked(hermitian_part(&(m / c64(tr, 0.0))), partition)
}

/// `ρ_A ⊗ ρ_B` with a one-qubit `A`.
pub fn random_product_state<R: Rng>(n_b: usize, rng: &mut R) -> DensityMatrix {
    let a = random_density_matrix(vec![1], 2, rng);
    let b = random_density_matrix(vec![n_b], 1 << n_b, rng);
    a.tensor(&b)
}

/// `Σ_k q_k |k><k| ⊗ σ_k` for a random orthonormal qubit basis `{|k>}`.
pub fn random_classical_quantum_state<R: Rng>(n_b: usize, rng: &mut R) -> DensityMatrix {
    let v = haar_unitary(2, rng);
    let q: f64 = rng.random_range(0.05..0.95);
    let db = 1usize << n_b;
    let mut m = CMatrix::zeros(2 * db, 2 * db);
    for (k, w) in [q, 1.0 - q].into_iter().enumerate() {
        let ket = v.column(k);
        let proj = ket * ket.adjoint();
        let rank = rng.random_range(1..=db);
        let sigma = random_density_matrix(vec![n_b], rank, rng);
        m += tensor(&proj, sigma.entries()) * c64(w, 0.0);
    }
    DensityMatrix::from_parts_unchecked(hermitian_part(&m), vec![1, n_b])
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` with Haar-random local unitaries.
pub fn random_local_rotation<R: Rng>(rho: &DensityMatrix, rng: &mut R) -> DensityMatrix {
    let ua = haar_unitary(2, rng);
    let ub = haar_unitary(rho.dim() / 2, rng);
    rho.conjugate(&tensor(&ua, &ub)).expect("dimensions match by construction")
}
