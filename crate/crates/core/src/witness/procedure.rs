// SPDX-License-Identifier: Apache-2.0

//! Iterative column acquisition: measure a few columns of the correlation
//! matrix, bound its rank from below, and keep measuring until the bound
//! exceeds `dim(A)` or every column has been measured.

use serde::{Deserialize, Serialize};

use super::{
    column_combination_scan, monte_carlo_svd, CorrelationMatrix, SingularValueDistribution, DEFAULT_BIN_WIDTH,
};
use crate::error::{Error, Result};
use crate::linalg::RMatrix;
use crate::nmr::simulate_measurement;
use crate::pauli::{Pauli, PauliLabel};
use crate::state::DensityMatrix;

/// Relative floor for `tau` when no element carries an uncertainty.
const EXACT_RANK_FLOOR: f64 = 1e-9;

/// One measured column `r_{·m}` with its uncertainties.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredColumn {
    pub label: PauliLabel,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
}

/// Provides correlation-matrix columns on demand.
pub trait ColumnSource {
    /// Labels `A_n` of the rows every column is reported on.
    fn row_labels(&self) -> Vec<PauliLabel>;
    /// Labels `B_m` that can be measured.
    fn available_columns(&self) -> Vec<PauliLabel>;
    fn measure(&mut self, label: &PauliLabel) -> Result<MeasuredColumn>;
}

/// Serves columns of an already measured matrix.
#[derive(Clone, Debug)]
pub struct MatrixSource {
    matrix: CorrelationMatrix,
}

impl MatrixSource {
    pub fn new(matrix: CorrelationMatrix) -> Self {
        MatrixSource { matrix }
    }
}

impl ColumnSource for MatrixSource {
    fn row_labels(&self) -> Vec<PauliLabel> {
        self.matrix.rows().to_vec()
    }

    fn available_columns(&self) -> Vec<PauliLabel> {
        self.matrix.cols().to_vec()
    }

    fn measure(&mut self, label: &PauliLabel) -> Result<MeasuredColumn> {
        let j = self.matrix.column_index(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let n = self.matrix.shape().0;
        Ok(MeasuredColumn {
            label: label.clone(),
            values: (0..n).map(|i| self.matrix.values()[(i, j)]).collect(),
            sigmas: (0..n).map(|i| self.matrix.sigmas().map_or(0.0, |s| s[(i, j)])).collect(),
        })
    }
}

type SigmaModel = Box<dyn Fn(&PauliLabel, &PauliLabel) -> f64 + Send + Sync>;

/// Measures columns of a known state, exactly or through the noisy
/// expectation-value emulator.
pub struct StateSource {
    rho: DensityMatrix,
    n_a: usize,
    sigma: Option<SigmaModel>,
    seed: u64,
}

impl StateSource {
    /// Exact columns; `A` is the first `n_a` qubits.
    pub fn exact(rho: DensityMatrix, n_a: usize) -> Result<Self> {
        if n_a == 0 || n_a >= rho.n_qubits() {
            return Err(Error::InvalidInput(format!("A must be a proper subset of the {} qubits", rho.n_qubits())));
        }
        Ok(StateSource { rho, n_a, sigma: None, seed: 0 })
    }

    /// Columns perturbed by Gaussian noise with per-element sigma
    /// `sigma(A_n, B_m)`; the reported uncertainties are those sigmas.
    pub fn noisy<F>(rho: DensityMatrix, n_a: usize, sigma: F, seed: u64) -> Result<Self>
    where
        F: Fn(&PauliLabel, &PauliLabel) -> f64 + Send + Sync + 'static,
    {
        let mut s = Self::exact(rho, n_a)?;
        s.sigma = Some(Box::new(sigma));
        s.seed = seed;
        Ok(s)
    }

    /// Measures every column and assembles the full matrix.
    pub fn full_matrix(&mut self) -> Result<CorrelationMatrix> {
        let rows = self.row_labels();
        let cols = self.available_columns();
        let mut values = RMatrix::zeros(rows.len(), cols.len());
        let mut sigmas = RMatrix::zeros(rows.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            let col = self.measure(c)?;
            for i in 0..rows.len() {
                values[(i, j)] = col.values[i];
                sigmas[(i, j)] = col.sigmas[i];
            }
        }
        CorrelationMatrix::new(rows, cols, values, Some(sigmas))
    }
}

impl ColumnSource for StateSource {
    fn row_labels(&self) -> Vec<PauliLabel> {
        PauliLabel::all(self.n_a)
    }

    fn available_columns(&self) -> Vec<PauliLabel> {
        PauliLabel::all(self.rho.n_qubits() - self.n_a)
    }

    fn measure(&mut self, label: &PauliLabel) -> Result<MeasuredColumn> {
        if label.num_qubits() != self.rho.n_qubits() - self.n_a {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        let mut values = Vec::new();
        let mut sigmas = Vec::new();
        for a in self.row_labels() {
            let full = a.concat(label);
            let sigma = match &self.sigma {
                Some(model) if !full.is_identity() => model(&a, label),
                _ => 0.0,
            };
            let (v, s) =
                if full.is_identity() { (1.0, 0.0) } else { simulate_measurement(&self.rho, &full, sigma, self.seed)? };
            values.push(v);
            sigmas.push(s);
        }
        Ok(MeasuredColumn { label: label.clone(), values, sigmas })
    }
}

/// Adapts a closure into a [`ColumnSource`].
pub struct FnColumnSource<F> {
    rows: Vec<PauliLabel>,
    cols: Vec<PauliLabel>,
    measure: F,
}

impl<F> FnColumnSource<F>
where
    F: FnMut(&PauliLabel) -> Result<MeasuredColumn>,
{
    pub fn new(rows: Vec<PauliLabel>, cols: Vec<PauliLabel>, measure: F) -> Self {
        FnColumnSource { rows, cols, measure }
    }
}

impl<F> ColumnSource for FnColumnSource<F>
where
    F: FnMut(&PauliLabel) -> Result<MeasuredColumn>,
{
    fn row_labels(&self) -> Vec<PauliLabel> {
        self.rows.clone()
    }

    fn available_columns(&self) -> Vec<PauliLabel> {
        self.cols.clone()
    }

    fn measure(&mut self, label: &PauliLabel) -> Result<MeasuredColumn> {
        (self.measure)(label)
    }
}

const INITIAL_BATCH: usize = 4;

/// Order in which columns are acquired.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum ColumnPolicy {
    /// Identity plus the `Z` patterns on the last two qubits first
    /// (`III, IZI, IIZ, IZZ` for three qubits), then the remaining
    /// `Z`-only strings, then everything else in lexicographic order. The
    /// initial batch is topped up to four columns from that order.
    #[default]
    ZSectorFirst,
    /// Explicit initial set and follow-up order; unlisted available
    /// columns are appended lexicographically.
    Custom { initial: Vec<PauliLabel>, then: Vec<PauliLabel> },
}

impl ColumnPolicy {
    pub fn schedule(&self, available: &[PauliLabel]) -> (Vec<PauliLabel>, Vec<PauliLabel>) {
        let mut sorted = available.to_vec();
        sorted.sort();
        let (mut initial, mut then) = match self {
            ColumnPolicy::ZSectorFirst => {
                let nb = sorted.first().map_or(0, PauliLabel::num_qubits);
                let tail = nb.min(2);
                let patterns: &[&[Pauli]] = if tail == 2 {
                    &[&[Pauli::I, Pauli::I], &[Pauli::Z, Pauli::I], &[Pauli::I, Pauli::Z], &[Pauli::Z, Pauli::Z]]
                } else {
                    &[&[Pauli::I], &[Pauli::Z]]
                };
                let initial: Vec<PauliLabel> = patterns
                    .iter()
                    .map(|p| {
                        let mut symbols = vec![Pauli::I; nb - tail];
                        symbols.extend_from_slice(p);
                        PauliLabel::new(symbols)
                    })
                    .collect();
                let z_only = |l: &PauliLabel| l.symbols().iter().all(|&s| s == Pauli::I || s == Pauli::Z);
                let mut then: Vec<PauliLabel> = sorted.iter().filter(|l| z_only(l)).cloned().collect();
                then.extend(sorted.iter().filter(|l| !z_only(l)).cloned());
                (initial, then)
            }
            ColumnPolicy::Custom { initial, then } => (initial.clone(), then.clone()),
        };
        initial.retain(|l| available.contains(l));
        let mut seen: Vec<PauliLabel> = initial.clone();
        then.retain(|l| {
            let keep = available.contains(l) && !seen.contains(l);
            if keep {
                seen.push(l.clone());
            }
            keep
        });
        then.extend(sorted.into_iter().filter(|l| !seen.contains(l)));
        let batch = match self {
            ColumnPolicy::ZSectorFirst => INITIAL_BATCH,
            ColumnPolicy::Custom { .. } => 1,
        };
        while initial.len() < batch && !then.is_empty() {
            initial.push(then.remove(0));
        }
        (initial, then)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    /// Singular-value threshold; `None` selects [`default_tau`] per step.
    pub tau: Option<f64>,
    /// A singular value counts as nonzero when its `1 - confidence`
    /// quantile exceeds `tau`.
    pub confidence: f64,
    pub n_samples: usize,
    pub bin_width: f64,
    pub seed: u64,
    pub policy: ColumnPolicy,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            tau: None,
            confidence: 0.99,
            n_samples: 2000,
            bin_width: DEFAULT_BIN_WIDTH,
            seed: 0,
            policy: ColumnPolicy::default(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    DiscordWitnessed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdict {
    pub outcome: Outcome,
    pub rank_lower_bound: usize,
    pub columns_used: Vec<PauliLabel>,
    pub confidence: f64,
    pub tau: f64,
    pub dim_a: usize,
    /// Per singular value: the `1 - confidence` quantile (or the exact value
    /// when the matrix carries no uncertainty).
    pub singular_value_quantiles: Vec<f64>,
}

impl WitnessVerdict {
    fn new(rank: &RankEstimate, columns_used: Vec<PauliLabel>, dim_a: usize, confidence: f64) -> Self {
        let outcome = if rank.rank > dim_a { Outcome::DiscordWitnessed } else { Outcome::Inconclusive };
        WitnessVerdict {
            outcome,
            rank_lower_bound: rank.rank,
            columns_used,
            confidence,
            tau: rank.tau,
            dim_a,
            singular_value_quantiles: rank.quantiles.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankEstimate {
    pub rank: usize,
    pub tau: f64,
    pub quantiles: Vec<f64>,
    pub distribution: Option<SingularValueDistribution>,
}

#[derive(Clone, Debug)]
pub struct WitnessRun {
    pub verdict: WitnessVerdict,
    /// Columns acquired, in acquisition order.
    pub matrix: CorrelationMatrix,
    /// Monte Carlo distribution of the final step, if uncertainties were present.
    pub distribution: Option<SingularValueDistribution>,
    /// Rank bound after each step.
    pub history: Vec<(usize, usize)>,
}

fn has_noise(r: &CorrelationMatrix) -> bool {
    r.sigmas().is_some_and(|s| s.iter().any(|&x| x > 0.0))
}

/// `median(nonzero sigmas) × (√rows + √cols)`, the typical spectral norm of
/// a noise matrix of that shape. Without uncertainties, a floor of
/// `1e-9 × largest singular value`.
pub fn default_tau(r: &CorrelationMatrix) -> f64 {
    let (nr, nc) = r.shape();
    tau_for_shape(r, nr, nc)
}

fn tau_for_shape(r: &CorrelationMatrix, nr: usize, nc: usize) -> f64 {
    let mut nonzero: Vec<f64> = r.sigmas().map_or(Vec::new(), |s| s.iter().copied().filter(|&x| x > 0.0).collect());
    if nonzero.is_empty() {
        return EXACT_RANK_FLOOR * r.singular_values().first().copied().unwrap_or(0.0);
    }
    nonzero.sort_by(f64::total_cmp);
    let mid = nonzero.len() / 2;
    let median = if nonzero.len() % 2 == 1 { nonzero[mid] } else { 0.5 * (nonzero[mid - 1] + nonzero[mid]) };
    median * ((nr as f64).sqrt() + (nc as f64).sqrt())
}

/// Counts singular values whose `1 - confidence` quantile exceeds `tau`.
pub fn rank_from_distribution(dist: &SingularValueDistribution, tau: f64, confidence: f64) -> (usize, Vec<f64>) {
    let q: Vec<f64> = (0..dist.n_values()).map(|k| dist.quantile(k, 1.0 - confidence)).collect();
    (q.iter().filter(|&&x| x > tau).count(), q)
}

pub(crate) fn estimate_rank(r: &CorrelationMatrix, opts: &WitnessOptions) -> Result<RankEstimate> {
    let tau = opts.tau.unwrap_or_else(|| default_tau(r));
    if !has_noise(r) {
        let sv = r.singular_values();
        return Ok(RankEstimate {
            rank: sv.iter().filter(|&&s| s > tau).count(),
            tau,
            quantiles: sv,
            distribution: None,
        });
    }
    let dist = monte_carlo_svd(r, opts.n_samples, opts.bin_width, opts.seed)?;
    let (rank, quantiles) = rank_from_distribution(&dist, tau, opts.confidence);
    Ok(RankEstimate { rank, tau, quantiles, distribution: Some(dist) })
}

fn assemble(rows: &[PauliLabel], columns: &[MeasuredColumn]) -> Result<CorrelationMatrix> {
    let nr = rows.len();
    let nc = columns.len();
    for c in columns {
        if c.values.len() != nr || c.sigmas.len() != nr {
            return Err(Error::Dimension(format!("column {} has the wrong number of rows", c.label)));
        }
    }
    let values = RMatrix::from_fn(nr, nc, |i, j| columns[j].values[i]);
    let sigmas = RMatrix::from_fn(nr, nc, |i, j| columns[j].sigmas[i]);
    CorrelationMatrix::new(rows.to_vec(), columns.iter().map(|c| c.label.clone()).collect(), values, Some(sigmas))
}

/// Rank verdict from [`column_combination_scan`] over a fully measured
/// matrix. The default `tau` is sized for the four-column subsets.
pub fn scan_verdict(
    r: &CorrelationMatrix,
    dim_a: usize,
    n_combos: usize,
    resamples: usize,
    opts: &WitnessOptions,
) -> Result<(WitnessVerdict, SingularValueDistribution)> {
    if !(opts.confidence > 0.0 && opts.confidence < 1.0) {
        return Err(Error::InvalidInput(format!("confidence {} outside (0, 1)", opts.confidence)));
    }
    let dist = column_combination_scan(r, n_combos, resamples, opts.bin_width, opts.seed)?;
    let tau = opts.tau.unwrap_or_else(|| tau_for_shape(r, r.shape().0, 4));
    let (rank, quantiles) = rank_from_distribution(&dist, tau, opts.confidence);
    let estimate = RankEstimate { rank, tau, quantiles, distribution: None };
    Ok((WitnessVerdict::new(&estimate, r.cols().to_vec(), dim_a, opts.confidence), dist))
}

/// Runs the acquisition loop until `rank > dim_a` (discord witnessed) or the
/// source is exhausted (inconclusive).
pub fn witness_procedure(source: &mut dyn ColumnSource, dim_a: usize, opts: &WitnessOptions) -> Result<WitnessRun> {
    if !(opts.confidence > 0.0 && opts.confidence < 1.0) {
        return Err(Error::InvalidInput(format!("confidence {} outside (0, 1)", opts.confidence)));
    }
    let rows = source.row_labels();
    let (initial, rest) = opts.policy.schedule(&source.available_columns());
    if initial.is_empty() {
        return Err(Error::InvalidInput("column source offers no columns".into()));
    }
    let mut measured = Vec::new();
    for label in &initial {
        measured.push(source.measure(label)?);
    }
    let mut pending = rest.into_iter();
    let mut history = Vec::new();
    loop {
        let matrix = assemble(&rows, &measured)?;
        let estimate = estimate_rank(&matrix, opts)?;
        history.push((measured.len(), estimate.rank));
        let next = if estimate.rank > dim_a { None } else { pending.next() };
        match next {
            Some(label) => measured.push(source.measure(&label)?),
            None => {
                let verdict = WitnessVerdict::new(&estimate, matrix.cols().to_vec(), dim_a, opts.confidence);
                return Ok(WitnessRun { verdict, matrix, distribution: estimate.distribution, history });
            }
        }
    }
}
