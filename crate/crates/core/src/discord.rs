// SPDX-License-Identifier: Apache-2.0

//! Quantum discord `D(A:B)` with rank-1 projective measurements on a qubit
//! `A`, the two mutual-information formulations it compares, and the
//! dephasing-invariance test characterizing zero-discord states.
//!
//! All entropies are in bits. System `A` is always the first (most
//! significant) qubit; `B` is everything else.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dqc1::Dqc1Instance;
use crate::error::{Error, Result};
use crate::linalg::{c64, eigenvalues_unchecked, entropy_bits, entropy_of_scaled, CMatrix, C64};
use crate::minimize::{minimize_on_sphere, MinimizerOptions, SphereMinimum};
use crate::pauli::Pauli;
use crate::state::DensityMatrix;

/// Outcomes with smaller probability are treated as never occurring.
pub const NULL_OUTCOME_PROB: f64 = 1e-14;
pub const ZERO_DISCORD_TOL: f64 = 1e-7;
/// Biases at which the small-polarization extrapolation evaluates discord.
pub const EXTRAPOLATION_BIASES: [f64; 3] = [1e-2, 3e-3, 1e-3];
pub const EXPONENT_WINDOW: (f64, f64) = (1.9, 2.1);
const DEGENERATE_DISCORD: f64 = 1e-13;

/// Rank-1 projective measurement `E_k = (I ± n̂·σ)/2` along a Bloch direction.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (theta, phi) = crate::minimize::canonical_angles(theta, phi);
        MeasurementBasis { theta, phi }
    }

    pub fn z() -> Self {
        MeasurementBasis { theta: 0.0, phi: 0.0 }
    }

    pub fn x() -> Self {
        MeasurementBasis { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Projector for outcome `k ∈ {0, 1}`; outcome 0 is the `+n̂` direction.
    pub fn projector(&self, k: usize) -> CMatrix {
        let sign = if k == 0 { 1.0 } else { -1.0 };
        let n = self.direction();
        let sigma = Pauli::X.matrix() * c64(n[0], 0.0)
            + Pauli::Y.matrix() * c64(n[1], 0.0)
            + Pauli::Z.matrix() * c64(n[2], 0.0);
        (CMatrix::identity(2, 2) + sigma * c64(sign, 0.0)) * c64(0.5, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerDiagnostics {
    pub evaluations: usize,
    pub iterations: usize,
    pub grid_value: f64,
    pub grid: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    /// `D(A:B)` in bits, clipped at zero.
    pub discord: f64,
    pub argmin_basis: MeasurementBasis,
    /// `I(A:B) = H(A) + H(B) - H(AB)`.
    pub mutual_information: f64,
    /// `J(A:B) = H(B) - min Σ_k p_k H(ρ_{B|k})`.
    pub classical_correlations: f64,
    /// `min Σ_k p_k H(ρ_{B|k})`.
    pub conditional_term: f64,
    pub diagnostics: MinimizerDiagnostics,
}

/// Result of measuring `A` and obtaining outcome `k`.
#[derive(Clone, Debug)]
pub struct ConditionalOutcome {
    pub probability: f64,
    /// `None` for a null outcome (`p_k` below [`NULL_OUTCOME_PROB`]).
    pub state: Option<DensityMatrix>,
}

fn split_dims(rho: &DensityMatrix, dims: (usize, usize)) -> Result<(usize, usize)> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::Dimension(format!("dims {da}x{db} do not factor a {}-dimensional state", rho.dim())));
    }
    Ok(dims)
}

fn qubit_a(rho: &DensityMatrix, dims: (usize, usize)) -> Result<usize> {
    let (da, db) = split_dims(rho, dims)?;
    if da != 2 {
        return Err(Error::InvalidInput(format!("discord minimization needs a qubit A side, got dim(A) = {da}")));
    }
    Ok(db)
}

/// The `dim_b`-sized blocks `ρ_{ij}` of a state with a qubit A side.
fn blocks(rho: &CMatrix, db: usize) -> [[CMatrix; 2]; 2] {
    let b = |i: usize, j: usize| rho.view((i * db, j * db), (db, db)).into_owned();
    [[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]]
}

/// `Tr_A((E ⊗ I) ρ) = Σ_{a,c} E[a,c] ρ_{ca}`.
fn conditioned_block(bl: &[[CMatrix; 2]; 2], e: &CMatrix) -> CMatrix {
    let mut m = &bl[0][0] * e[(0, 0)];
    m += &bl[1][0] * e[(0, 1)];
    m += &bl[0][1] * e[(1, 0)];
    m += &bl[1][1] * e[(1, 1)];
    m
}

fn trace_out_first(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    let mut out = CMatrix::zeros(db, db);
    for a in 0..da {
        out += m.view((a * db, a * db), (db, db));
    }
    out
}

fn trace_out_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum::<C64>())
}

/// Probability of outcome `k` and the normalized post-measurement state of `B`.
pub fn conditional_state(rho: &DensityMatrix, basis: &MeasurementBasis, k: usize) -> Result<ConditionalOutcome> {
    if k > 1 {
        return Err(Error::InvalidInput(format!("outcome index {k} for a two-outcome measurement")));
    }
    if rho.n_qubits() < 2 {
        return Err(Error::Dimension("conditional state needs at least two qubits".into()));
    }
    let db = rho.dim() / 2;
    let lift = crate::linalg::tensor(&basis.projector(k), &CMatrix::identity(db, db));
    let post = &lift * rho.entries() * &lift;
    let unnormalized = trace_out_first(&post, 2, db);
    let p = crate::linalg::trace(&unnormalized).re;
    if p < NULL_OUTCOME_PROB {
        return Ok(ConditionalOutcome { probability: p.max(0.0), state: None });
    }
    let partition = vec![rho.n_qubits() - 1];
    let state = DensityMatrix::from_parts_unchecked(
        crate::linalg::hermitian_part(&(unnormalized * c64(1.0 / p, 0.0))),
        partition,
    );
    Ok(ConditionalOutcome { probability: p, state: Some(state) })
}

/// `Σ_k p_k H(ρ_{B|k})` for one measurement direction.
fn conditional_entropy_term(bl: &[[CMatrix; 2]; 2], basis: &MeasurementBasis) -> f64 {
    (0..2)
        .map(|k| {
            let m = conditioned_block(bl, &basis.projector(k));
            let p = crate::linalg::trace(&m).re;
            if p < NULL_OUTCOME_PROB {
                0.0
            } else {
                p * entropy_of_scaled(&m, p)
            }
        })
        .sum()
}

/// `I(A:B) = H(A) + H(B) - H(AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let (da, db) = split_dims(rho, dims)?;
    let m = rho.entries();
    let ha = entropy_bits(&eigenvalues_unchecked(&trace_out_second(m, da, db)));
    let hb = entropy_bits(&eigenvalues_unchecked(&trace_out_first(m, da, db)));
    Ok(ha + hb - rho.von_neumann_entropy())
}

/// Discord `D(A:B)` minimized over rank-1 projective measurements on `A`.
pub fn discord(rho: &DensityMatrix, dims: (usize, usize), opts: &MinimizerOptions) -> Result<DiscordResult> {
    let db = qubit_a(rho, dims)?;
    let m = rho.entries();
    let h_a = entropy_bits(&eigenvalues_unchecked(&trace_out_second(m, 2, db)));
    let h_b = entropy_bits(&eigenvalues_unchecked(&trace_out_first(m, 2, db)));
    let h_ab = rho.von_neumann_entropy();

    let bl = blocks(m, db);
    let best = minimize_on_sphere(|t, p| conditional_entropy_term(&bl, &MeasurementBasis { theta: t, phi: p }), opts);
    Ok(assemble(h_a, h_b, h_ab, &best, opts))
}

fn assemble(h_a: f64, h_b: f64, h_ab: f64, best: &SphereMinimum, opts: &MinimizerOptions) -> DiscordResult {
    let conditional_term = best.value;
    let mutual_information = h_a + h_b - h_ab;
    let classical_correlations = h_b - conditional_term;
    DiscordResult {
        discord: (h_a - h_ab + conditional_term).max(0.0),
        argmin_basis: MeasurementBasis { theta: best.theta, phi: best.phi },
        mutual_information,
        classical_correlations,
        conditional_term,
        diagnostics: MinimizerDiagnostics {
            evaluations: best.evaluations,
            iterations: best.iterations,
            grid_value: best.grid_value,
            grid: (opts.grid_theta, opts.grid_phi),
        },
    }
}

/// `Σ_k (E_k ⊗ I) ρ (E_k ⊗ I)`: complete dephasing of `A` in `basis`.
pub fn projective_average(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    if rho.n_qubits() < 2 {
        return Err(Error::Dimension("projective average needs at least two qubits".into()));
    }
    let db = rho.dim() / 2;
    let out = dephase(&blocks(rho.entries(), db), basis, db);
    Ok(DensityMatrix::from_parts_unchecked(crate::linalg::hermitian_part(&out), rho.qubit_partition().to_vec()))
}

fn dephase(bl: &[[CMatrix; 2]; 2], basis: &MeasurementBasis, db: usize) -> CMatrix {
    let mut out = CMatrix::zeros(2 * db, 2 * db);
    for k in 0..2 {
        let e = basis.projector(k);
        for a in 0..2 {
            for b in 0..2 {
                let mut block = CMatrix::zeros(db, db);
                for c in 0..2 {
                    for d in 0..2 {
                        let w = e[(a, c)] * e[(d, b)];
                        if w.norm() > 0.0 {
                            block += &bl[c][d] * w;
                        }
                    }
                }
                let mut view = out.view_mut((a * db, b * db), (db, db));
                view += block;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDiscordCheck {
    pub zero_discord: bool,
    /// Minimum over bases of `‖ρ - Σ_k (E_k⊗I)ρ(E_k⊗I)‖_F`.
    pub min_distance: f64,
    pub best_basis: MeasurementBasis,
}

impl ZeroDiscordCheck {
    /// The dephasing basis leaving the state invariant, if one was found.
    pub fn witness_basis(&self) -> Option<MeasurementBasis> {
        self.zero_discord.then_some(self.best_basis)
    }
}

/// Whether some projective measurement on `A` leaves `ρ` invariant to within
/// `tol` in Frobenius norm.
pub fn is_zero_discord(rho: &DensityMatrix, tol: f64, opts: &MinimizerOptions) -> Result<ZeroDiscordCheck> {
    if rho.n_qubits() < 2 {
        return Err(Error::Dimension("zero-discord test needs at least two qubits".into()));
    }
    let db = rho.dim() / 2;
    let m = rho.entries();
    let bl = blocks(m, db);
    let best = minimize_on_sphere(
        |t, p| {
            let diff = m - dephase(&bl, &MeasurementBasis { theta: t, phi: p }, db);
            diff.iter().map(|z| z.norm_sqr()).sum::<f64>()
        },
        opts,
    );
    let min_distance = best.value.max(0.0).sqrt();
    Ok(ZeroDiscordCheck {
        zero_discord: min_distance < tol,
        min_distance,
        best_basis: MeasurementBasis { theta: best.theta, phi: best.phi },
    })
}

/// Discord of the one-clean-qubit output at polarization `alpha_target`,
/// extrapolated from larger biases under `D(ε) = c ε^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolatedDiscord {
    pub alpha: f64,
    pub discord: f64,
    /// Fitted `p`; `None` when every sampled discord vanished.
    pub exponent: Option<f64>,
    pub prefactor: f64,
    /// `(ε, D(ε))` pairs the fit used.
    pub samples: Vec<(f64, f64)>,
}

pub fn discord_at_small_polarization(
    unitary: &CMatrix,
    alpha_target: f64,
    opts: &MinimizerOptions,
) -> Result<ExtrapolatedDiscord> {
    if !(alpha_target > 0.0 && alpha_target < 1e-4) {
        return Err(Error::InvalidInput(format!(
            "extrapolation targets polarizations in (0, 1e-4); compute {alpha_target} directly"
        )));
    }
    let samples = EXTRAPOLATION_BIASES
        .iter()
        .map(|&eps| {
            let out = Dqc1Instance::new(eps, unitary.clone())?.output_state();
            let d = discord(&out, (2, out.dim() / 2), opts)?.discord;
            Ok((eps, d))
        })
        .collect::<Result<Vec<_>>>()?;

    if samples.iter().all(|&(_, d)| d <= DEGENERATE_DISCORD) {
        return Ok(ExtrapolatedDiscord { alpha: alpha_target, discord: 0.0, exponent: None, prefactor: 0.0, samples });
    }
    let (lo, hi) = EXPONENT_WINDOW;
    if samples.iter().any(|&(_, d)| d <= DEGENERATE_DISCORD) {
        return Err(Error::ScalingFit { exponent: f64::NAN, lo, hi });
    }
    let (slope, intercept) = fit_line(&samples.iter().map(|&(e, d)| (e.ln(), d.ln())).collect::<Vec<_>>());
    if !(lo..=hi).contains(&slope) {
        return Err(Error::ScalingFit { exponent: slope, lo, hi });
    }
    let prefactor = intercept.exp();
    Ok(ExtrapolatedDiscord {
        alpha: alpha_target,
        discord: prefactor * alpha_target.powf(slope),
        exponent: Some(slope),
        prefactor,
        samples,
    })
}

/// Least-squares `y = slope x + intercept`.
fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarSurveyEntry {
    pub seed: u64,
    pub discord: f64,
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarSurvey {
    pub n: usize,
    pub alpha: f64,
    pub entries: Vec<HaarSurveyEntry>,
    pub mean: f64,
    pub stderr: f64,
}

/// Extrapolated discord for Haar-random `U_n` drawn with seeds
/// `base_seed, base_seed + 1, ...`.
pub fn haar_survey(
    n: usize,
    n_seeds: usize,
    base_seed: u64,
    alpha: f64,
    opts: &MinimizerOptions,
) -> Result<HaarSurvey> {
    if n_seeds == 0 {
        return Err(Error::InvalidInput("survey needs at least one seed".into()));
    }
    let entries = (0..n_seeds as u64)
        .into_par_iter()
        .map(|k| {
            let seed = base_seed.wrapping_add(k);
            let u = crate::dqc1::haar_random_unitary(1 << n, seed)?;
            let ex = discord_at_small_polarization(&u, alpha, opts)?;
            Ok(HaarSurveyEntry { seed, discord: ex.discord, exponent: ex.exponent })
        })
        .collect::<Result<Vec<_>>>()?;
    let count = entries.len() as f64;
    let mean = entries.iter().map(|e| e.discord).sum::<f64>() / count;
    let var = if entries.len() > 1 {
        entries.iter().map(|e| (e.discord - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    Ok(HaarSurvey { n, alpha, entries, mean, stderr: (var / count).sqrt() })
}
