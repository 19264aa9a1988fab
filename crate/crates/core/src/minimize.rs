// SPDX-License-Identifier: Apache-2.0

//! Deterministic minimization over Bloch-sphere directions: a dense
//! `(θ, φ)` grid followed by Nelder–Mead polishing of the best grid minima.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerOptions {
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Simplex size (radians) at which polishing stops.
    pub angular_tol: f64,
    /// Number of distinct grid local minima that get polished.
    pub refine_candidates: usize,
    pub max_iterations: usize,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        MinimizerOptions { grid_theta: 64, grid_phi: 64, angular_tol: 1e-8, refine_candidates: 3, max_iterations: 500 }
    }
}

impl MinimizerOptions {
    pub fn with_grid(grid: usize) -> Self {
        MinimizerOptions { grid_theta: grid, grid_phi: grid, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereMinimum {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    pub grid_value: f64,
    pub evaluations: usize,
    pub iterations: usize,
}

pub fn minimize_on_sphere<F>(f: F, opts: &MinimizerOptions) -> SphereMinimum
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let nt = opts.grid_theta.max(2);
    let np = opts.grid_phi.max(1);
    let dt = PI / (nt - 1) as f64;
    let dp = 2.0 * PI / np as f64;

    let values: Vec<f64> =
        (0..nt * np).into_par_iter().map(|idx| f((idx / np) as f64 * dt, (idx % np) as f64 * dp)).collect();
    let at = |i: usize, j: usize| values[i * np + j];

    // Grid local minima, lowest first; ties broken by index for determinism.
    let mut minima: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            let v = at(i, j);
            let is_min = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().all(|&(di, dj)| {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nt as i64 {
                    return true;
                }
                let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                v <= at(ii as usize, jj)
            });
            if is_min {
                minima.push((v, i, j));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let grid_value = minima.first().map_or(f64::INFINITY, |m| m.0);

    let mut best = SphereMinimum {
        theta: minima.first().map_or(0.0, |m| m.1 as f64 * dt),
        phi: minima.first().map_or(0.0, |m| m.2 as f64 * dp),
        value: grid_value,
        grid_value,
        evaluations: values.len(),
        iterations: 0,
    };
    for &(_, i, j) in minima.iter().take(opts.refine_candidates.max(1)) {
        let start = [i as f64 * dt, j as f64 * dp];
        let polished = nelder_mead(&f, start, [dt, dp], opts.angular_tol, opts.max_iterations);
        best.evaluations += polished.evaluations;
        best.iterations += polished.iterations;
        if polished.value < best.value {
            best.theta = polished.point[0];
            best.phi = polished.point[1];
            best.value = polished.value;
        }
    }
    let (theta, phi) = canonical_angles(best.theta, best.phi);
    best.theta = theta;
    best.phi = phi;
    best
}

/// Maps arbitrary angles to `θ ∈ [0, π]`, `φ ∈ [0, 2π)` describing the same
/// direction.
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(2.0 * PI);
    let mut p = phi;
    if t > PI {
        t = 2.0 * PI - t;
        p += PI;
    }
    (t, p.rem_euclid(2.0 * PI))
}

struct Polished {
    point: [f64; 2],
    value: f64,
    evaluations: usize,
    iterations: usize,
}

fn nelder_mead<F>(f: &F, start: [f64; 2], step: [f64; 2], tol: f64, max_iter: usize) -> Polished
where
    F: Fn(f64, f64) -> f64,
{
    let eval = |p: [f64; 2]| f(p[0], p[1]);
    let mut simplex = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut vals = simplex.map(eval);
    let mut evaluations = 3;
    let mut iterations = 0;

    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    while iterations < max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.map(|k| simplex[k]);
        vals = order.map(|k| vals[k]);

        let size = simplex[1..]
            .iter()
            .map(|p| (p[0] - simplex[0][0]).abs().max((p[1] - simplex[0][1]).abs()))
            .fold(0.0, f64::max);
        if size < tol {
            break;
        }
        iterations += 1;

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = eval(reflected);
        evaluations += 1;
        if fr < vals[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = eval(expanded);
            evaluations += 1;
            if fe < fr {
                simplex[2] = expanded;
                vals[2] = fe;
            } else {
                simplex[2] = reflected;
                vals[2] = fr;
            }
            continue;
        }
        if fr < vals[1] {
            simplex[2] = reflected;
            vals[2] = fr;
            continue;
        }
        let contracted = if fr < vals[2] { lerp(centroid, reflected, 0.5) } else { lerp(centroid, simplex[2], 0.5) };
        let fc = eval(contracted);
        evaluations += 1;
        if fc < vals[2].min(fr) {
            simplex[2] = contracted;
            vals[2] = fc;
            continue;
        }
        for k in 1..3 {
            simplex[k] = lerp(simplex[0], simplex[k], 0.5);
            vals[k] = eval(simplex[k]);
            evaluations += 1;
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    Polished { point: simplex[best], value: vals[best], evaluations, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_offgrid_minimum_of_smooth_function() {
        let (t0, p0): (f64, f64) = (1.234_567, 4.321);
        let target = [t0.sin() * p0.cos(), t0.sin() * p0.sin(), t0.cos()];
        let f = |t: f64, p: f64| {
            let n = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
            1.0 - (n[0] * target[0] + n[1] * target[1] + n[2] * target[2])
        };
        let m = minimize_on_sphere(f, &MinimizerOptions::with_grid(16));
        assert!(m.value < 1e-15);
        assert!((m.theta - t0).abs() < 1e-7 && (m.phi - p0).abs() < 1e-7);
        assert!(m.value <= m.grid_value);
    }

    #[test]
    fn canonical_angles_fold_into_range() {
        let (t, p) = canonical_angles(-0.3, 7.0);
        assert!((t - 0.3).abs() < 1e-15);
        assert!((p - (7.0 + PI).rem_euclid(2.0 * PI)).abs() < 1e-12);
        let (t, _) = canonical_angles(PI + 0.1, 0.0);
        assert!((t - (PI - 0.1)).abs() < 1e-12);
    }
}
