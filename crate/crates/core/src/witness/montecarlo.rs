// SPDX-License-Identifier: Apache-2.0

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::linalg::{singular_values, RMatrix};

pub const DEFAULT_BIN_WIDTH: f64 = 0.005;

/// Stream reserved for choosing column subsets in the combination scan.
const COMBO_STREAM: u64 = u64::MAX;

/// Noise generator for sample `index`; depends only on `(seed, index)`.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn perturbed(values: &RMatrix, sigmas: &RMatrix, rng: &mut ChaCha8Rng) -> RMatrix {
    let mut m = values.clone();
    for (v, &s) in m.iter_mut().zip(sigmas.iter()) {
        let z: f64 = StandardNormal.sample(rng);
        if s > 0.0 {
            *v += s * z;
        }
    }
    m
}

/// Per-singular-value histogram. `relative_occurrence` is
/// `count / (n_samples * bin_width)`, so it integrates to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_centers: Vec<f64>,
    pub relative_occurrence: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl Histogram {
    pub fn from_samples(samples: &[f64], bin_width: f64) -> Histogram {
        let n = samples.len();
        let max = samples.iter().copied().fold(0.0, f64::max);
        let n_bins = (max / bin_width).floor() as usize + 1;
        let mut counts = vec![0usize; n_bins];
        for &s in samples {
            let b = ((s.max(0.0) / bin_width).floor() as usize).min(n_bins - 1);
            counts[b] += 1;
        }
        let mut running = 0usize;
        let mut cumulative = Vec::with_capacity(n_bins);
        for &c in &counts {
            running += c;
            cumulative.push(running as f64 / n as f64);
        }
        Histogram {
            bin_centers: (0..n_bins).map(|b| (b as f64 + 0.5) * bin_width).collect(),
            relative_occurrence: counts.iter().map(|&c| c as f64 / (n as f64 * bin_width)).collect(),
            cumulative,
        }
    }

    /// `bin_center,relative_occurrence,cumulative` with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,relative_occurrence,cumulative\n");
        for k in 0..self.bin_centers.len() {
            out.push_str(&format!(
                "{:.6},{:.6},{:.6}\n",
                self.bin_centers[k], self.relative_occurrence[k], self.cumulative[k]
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Histogram> {
        let mut lines = text.lines();
        match lines.next() {
            Some("bin_center,relative_occurrence,cumulative") => {}
            other => return Err(Error::InvalidInput(format!("unexpected histogram header {other:?}"))),
        }
        let mut h = Histogram { bin_centers: vec![], relative_occurrence: vec![], cumulative: vec![] };
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| Error::InvalidInput(format!("{line:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if fields.len() != 3 {
                return Err(Error::InvalidInput(format!("expected three fields in {line:?}")));
            }
            h.bin_centers.push(fields[0]);
            h.relative_occurrence.push(fields[1]);
            h.cumulative.push(fields[2]);
        }
        Ok(h)
    }

    /// `Σ relative_occurrence × bin_width`, using the bin spacing.
    pub fn integral(&self) -> f64 {
        let width = match self.bin_centers.as_slice() {
            [a, b, ..] => b - a,
            [c] => 2.0 * c,
            [] => 0.0,
        };
        self.relative_occurrence.iter().sum::<f64>() * width
    }
}

/// Sampled singular values (`samples[i][k]` is the `k`-th largest singular
/// value of sample `i`) and their histograms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularValueDistribution {
    pub samples: Vec<Vec<f64>>,
    pub bin_width: f64,
    pub histograms: Vec<Histogram>,
}

impl SingularValueDistribution {
    pub fn from_samples(samples: Vec<Vec<f64>>, bin_width: f64) -> Result<Self> {
        if bin_width.is_nan() || bin_width <= 0.0 {
            return Err(Error::InvalidInput(format!("bin width {bin_width} must be positive")));
        }
        let k = samples.first().map_or(0, Vec::len);
        let histograms = (0..k)
            .map(|j| Histogram::from_samples(&samples.iter().map(|s| s[j]).collect::<Vec<_>>(), bin_width))
            .collect();
        Ok(SingularValueDistribution { samples, bin_width, histograms })
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn n_values(&self) -> usize {
        self.histograms.len()
    }

    pub fn values_of(&self, k: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[k]).collect()
    }

    /// Empirical `q`-quantile of the `k`-th singular value (linear
    /// interpolation between order statistics).
    pub fn quantile(&self, k: usize, q: f64) -> f64 {
        let mut v = self.values_of(k);
        v.sort_by(f64::total_cmp);
        let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }

    pub fn median(&self, k: usize) -> f64 {
        self.quantile(k, 0.5)
    }

    pub fn mean(&self, k: usize) -> f64 {
        self.values_of(k).iter().sum::<f64>() / self.n_samples() as f64
    }
}

fn require_sigmas(r: &CorrelationMatrix) -> Result<&RMatrix> {
    r.sigmas().ok_or(Error::MissingSigmas)
}

/// Perturbs every element by independent Gaussian noise of its sigma and
/// records the singular values, `n_samples` times.
pub fn monte_carlo_svd(
    r: &CorrelationMatrix,
    n_samples: usize,
    bin_width: f64,
    seed: u64,
) -> Result<SingularValueDistribution> {
    let sigmas = require_sigmas(r)?;
    if n_samples == 0 {
        return Err(Error::InvalidInput("need at least one Monte Carlo sample".into()));
    }
    let values = r.values();
    let samples = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| singular_values(&perturbed(values, sigmas, &mut sample_rng(seed, i))))
        .collect();
    SingularValueDistribution::from_samples(samples, bin_width)
}

/// Pools singular values over random four-column subsets that always contain
/// the first column, each resampled `resamples_per_combo` times.
pub fn column_combination_scan(
    r: &CorrelationMatrix,
    n_combos: usize,
    resamples_per_combo: usize,
    bin_width: f64,
    seed: u64,
) -> Result<SingularValueDistribution> {
    const SUBSET: usize = 4;
    let sigmas = require_sigmas(r)?;
    let n_cols = r.shape().1;
    if n_cols < SUBSET {
        return Err(Error::InvalidInput(format!("scan needs at least {SUBSET} columns, got {n_cols}")));
    }
    if n_combos == 0 || resamples_per_combo == 0 {
        return Err(Error::InvalidInput("scan needs at least one combination and one resample".into()));
    }
    let mut picker = sample_rng(seed, COMBO_STREAM);
    let combos: Vec<Vec<usize>> = (0..n_combos)
        .map(|_| {
            let mut cols = vec![0];
            cols.extend(sample(&mut picker, n_cols - 1, SUBSET - 1).into_iter().map(|j| j + 1));
            cols
        })
        .collect();
    let samples = (0..(n_combos * resamples_per_combo) as u64)
        .into_par_iter()
        .map(|i| {
            let cols = &combos[i as usize / resamples_per_combo];
            let v = r.values().select_columns(cols);
            let s = sigmas.select_columns(cols);
            singular_values(&perturbed(&v, &s, &mut sample_rng(seed, i)))
        })
        .collect();
    SingularValueDistribution::from_samples(samples, bin_width)
}
