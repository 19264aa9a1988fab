// SPDX-License-Identifier: Apache-2.0

//! Liquid-state NMR ensemble model: thermal polarization, the pseudopure
//! embedding `ρ = (1-α) I/2^N + α ρ_pps`, and an expectation-value-level
//! measurement emulator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::discord::{is_zero_discord, ZERO_DISCORD_TOL};
use crate::error::{Error, Result};
use crate::minimize::MinimizerOptions;
use crate::pauli::PauliLabel;
use crate::state::{DensityMatrix, StateJson};

// CODATA 2018 exact values.
pub const HBAR: f64 = 1.054_571_817e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Ground-state bias `ħ γ B0 / (2 k_B T)` of a spin-1/2 ensemble.
/// `gamma` in rad s⁻¹ T⁻¹, `b0` in tesla, `temperature` in kelvin.
pub fn boltzmann_polarization(gamma: f64, b0: f64, temperature: f64) -> f64 {
    HBAR * gamma * b0 / (2.0 * BOLTZMANN * temperature)
}

/// `(1 - α) I/2^N + α ρ_pps`.
pub fn embed(pps: &DensityMatrix, alpha: f64) -> Result<DensityMatrix> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("polarization {alpha} outside (0, 1]")));
    }
    let mixed = DensityMatrix::maximally_mixed(pps.n_qubits());
    pps.mix(&mixed, 1.0 - alpha)
}

#[derive(Clone, Debug)]
pub struct NmrEnsemble {
    alpha: f64,
    pps: DensityMatrix,
}

impl NmrEnsemble {
    pub fn new(alpha: f64, pps: DensityMatrix) -> Result<Self> {
        embed(&pps, alpha)?;
        Ok(NmrEnsemble { alpha, pps })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_qubits(&self) -> usize {
        self.pps.n_qubits()
    }

    pub fn pps(&self) -> &DensityMatrix {
        &self.pps
    }

    pub fn physical_state(&self) -> DensityMatrix {
        embed(&self.pps, self.alpha).expect("alpha validated at construction")
    }
}

/// A state given by fixture name or explicitly.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Explicit(StateJson),
}

impl StateSpec {
    pub fn resolve(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Named(name) => crate::fixtures::named_state(name),
            StateSpec::Explicit(json) => json.to_state(),
        }
    }
}

/// Ensemble file format: `{"alpha": a, "pps": <state spec or fixture name>}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub alpha: f64,
    pub pps: StateSpec,
}

impl EnsembleJson {
    pub fn to_ensemble(&self) -> Result<NmrEnsemble> {
        NmrEnsemble::new(self.alpha, self.pps.resolve()?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizationInvariance {
    pub invariant: bool,
    pub pps_zero_discord: bool,
    /// `(α, zero-discord verdict of the embedded state)`.
    pub per_alpha: Vec<(f64, bool)>,
}

/// Checks that the zero-discord verdict of `embed(pps, α)` matches that of
/// `pps` for every listed `α`.
pub fn verdict_polarization_invariance(pps: &DensityMatrix, alphas: &[f64]) -> Result<PolarizationInvariance> {
    let opts = MinimizerOptions::default();
    let base = is_zero_discord(pps, ZERO_DISCORD_TOL, &opts)?.zero_discord;
    let per_alpha = alphas
        .iter()
        .map(|&a| Ok((a, is_zero_discord(&embed(pps, a)?, ZERO_DISCORD_TOL, &opts)?.zero_discord)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolarizationInvariance {
        invariant: per_alpha.iter().all(|&(_, z)| z == base),
        pps_zero_discord: base,
        per_alpha,
    })
}

/// `Tr(ρ P)` plus Gaussian noise of width `sigma`; the noise is a function of
/// `(seed, observable)` only.
pub fn simulate_measurement(rho: &DensityMatrix, observable: &PauliLabel, sigma: f64, seed: u64) -> Result<(f64, f64)> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidInput(format!("sigma {sigma} must be non-negative")));
    }
    let exact = rho.expectation(observable)?;
    if sigma == 0.0 {
        return Ok((exact, 0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((observable.num_qubits() as u64) << 32) | observable.index() as u64);
    let z: f64 = StandardNormal.sample(&mut rng);
    Ok((exact + sigma * z, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{c64, identity};
    use crate::witness::correlation_matrix;
    use approx::assert_relative_eq;

    const GAMMA_C13: f64 = 6.728e7;

    #[test]
    fn room_temperature_carbon_polarization() {
        let alpha = boltzmann_polarization(GAMMA_C13, 16.4, 300.0);
        assert!((alpha / 1.4e-5 - 1.0).abs() < 0.02, "{alpha}");
        assert_eq!(boltzmann_polarization(GAMMA_C13, 0.0, 300.0), 0.0);
        assert_relative_eq!(boltzmann_polarization(GAMMA_C13, 32.8, 300.0), 2.0 * alpha, max_relative = 1e-15);
    }

    #[test]
    fn polarization_linear_on_grid() {
        let base = boltzmann_polarization(GAMMA_C13, 1.0, 1.0);
        for i in 1..=10 {
            for j in 1..=10 {
                let (b, t) = (1.7 * i as f64, 30.0 * j as f64);
                let a = boltzmann_polarization(GAMMA_C13, b, t);
                assert!((a / (base * b / t) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn embed_examples() {
        let pps = fixtures::final_dqc1();
        assert_eq!(embed(&pps, 1.0).unwrap().entries(), pps.entries());
        let mixed = DensityMatrix::maximally_mixed(3);
        let e = embed(&mixed, 0.37).unwrap();
        assert!((e.entries() - identity(8) * c64(0.125, 0.)).norm() < 1e-16);
        assert!(embed(&pps, 0.0).is_err());
        assert!(embed(&pps, 1.2).is_err());
    }

    #[test]
    fn embedding_scales_non_identity_correlations() {
        let pps = fixtures::final_dqc1();
        let alpha = 3e-3;
        let r0 = correlation_matrix(&pps, (2, 8)).unwrap();
        let r1 = correlation_matrix(&embed(&pps, alpha).unwrap(), (2, 8)).unwrap();
        assert_eq!(r1.values()[(0, 0)], 1.0);
        for i in 0..4 {
            for j in 0..64 {
                if i + j > 0 {
                    assert!((r1.values()[(i, j)] - alpha * r0.values()[(i, j)]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let zz = DensityMatrix::from_pauli_coefficients(
            &[("II".parse().unwrap(), 1.0), ("ZZ".parse().unwrap(), 1.0)],
            vec![1, 1],
        )
        .unwrap();
        let check = verdict_polarization_invariance(&zz, &[1e-3, 0.2, 0.9]).unwrap();
        assert!(check.invariant && check.pps_zero_discord);
        let check = verdict_polarization_invariance(&fixtures::bell(), &[0.01, 0.99]).unwrap();
        assert!(check.invariant && !check.pps_zero_discord);
    }

    #[test]
    fn measurement_emulator() {
        let rho = fixtures::final_dqc1();
        let p: PauliLabel = "XIZI".parse().unwrap();
        let exact = rho.expectation(&p).unwrap();
        assert_eq!(simulate_measurement(&rho, &p, 0.0, 4).unwrap(), (exact, 0.0));
        let mixed = DensityMatrix::maximally_mixed(4);
        assert_eq!(simulate_measurement(&mixed, &p, 0.0, 4).unwrap().0, 0.0);
        assert!(simulate_measurement(&rho, &p, -0.1, 4).is_err());
        assert_eq!(simulate_measurement(&rho, &p, 0.05, 9).unwrap(), simulate_measurement(&rho, &p, 0.05, 9).unwrap());
        let n = 10_000;
        let mean = (0..n).map(|s| simulate_measurement(&rho, &p, 0.05, s).unwrap().0).sum::<f64>() / n as f64;
        assert!((mean - exact).abs() < 3.0 * 0.05 / 100.0);
    }

    #[test]
    fn ensemble_json_accepts_names_and_matrices() {
        let named: EnsembleJson = serde_json::from_str(r#"{"alpha": 1e-3, "pps": "bell"}"#).unwrap();
        let ens = named.to_ensemble().unwrap();
        assert_eq!(ens.n_qubits(), 2);
        let explicit = serde_json::json!({
            "alpha": 0.5,
            "pps": {"re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}
        });
        let ens: EnsembleJson = serde_json::from_value(explicit).unwrap();
        let phys = ens.to_ensemble().unwrap().physical_state();
        assert!((phys.entries()[(0, 1)].re - 0.25).abs() < 1e-15);
    }
}
