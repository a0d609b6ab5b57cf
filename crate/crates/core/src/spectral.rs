//! Normalized-Laplacian eigen-solvers on looped views.
//!
//! For a view with inner adjacency `A` and degrees `d` (inner degree plus loop
//! weight), the operator is `N = D^{-1/2} (D_inner - A) D^{-1/2}`; loops cancel
//! out of the Laplacian but stay in the degrees. `N` has eigenvalue 0 with
//! eigenvector `sqrt(d)` and spectrum inside `[0, 2]`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::LoopedGraph;

/// Approximate second eigenpair of the normalized Laplacian.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub residual: f64,
    /// Unit eigenvector in symmetric coordinates, indexed locally.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Stopping rule for [`fiedler_power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSettings {
    pub gap_floor: f64,
    pub tolerance: f64,
}

impl Default for PowerSettings {
    fn default() -> Self {
        PowerSettings { gap_floor: 1e-3, tolerance: 1e-8 }
    }
}

impl PowerSettings {
    pub fn max_iters(&self, n: usize) -> usize {
        let log = ((n + 2) as f64).log2().ceil() as usize;
        10 * log * (1.0 / self.gap_floor).ceil() as usize
    }
}

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic start value in `[-1, 1]` for a global vertex id.
pub fn start_value(id: usize) -> f64 {
    let bits = mix64(id as u64) >> 11;
    bits as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

fn sqrt_degrees(h: &LoopedGraph) -> Vec<f64> {
    (0..h.len()).map(|i| (h.local_degree(i) as f64).sqrt()).collect()
}

/// `y = N x`.
fn apply(h: &LoopedGraph, sqrt_d: &[f64], x: &[f64], y: &mut [f64]) {
    for i in 0..h.len() {
        let mut acc = 0.0;
        for &j in h.local_neighbors(i) {
            acc += x[j] / sqrt_d[j];
        }
        let d = sqrt_d[i] * sqrt_d[i];
        y[i] = h.inner_degree(i) as f64 / d * x[i] - acc / sqrt_d[i];
    }
}

fn deflate_and_normalize(x: &mut [f64], unit_top: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(unit_top).map(|(a, b)| a * b).sum();
    x.iter_mut().zip(unit_top).for_each(|(a, b)| *a -= dot * b);
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}

/// Second eigenpair by power iteration on the lazy operator `I - N/2`,
/// projected away from `sqrt(d)` on every step.
pub fn fiedler_power(h: &LoopedGraph, settings: PowerSettings) -> Result<Eigenpair> {
    let n = h.len();
    assert!(n >= 2, "need at least two vertices");
    let sqrt_d = sqrt_degrees(h);
    let top_norm = sqrt_d.iter().map(|s| s * s).sum::<f64>().sqrt();
    let unit_top: Vec<f64> = sqrt_d.iter().map(|s| s / top_norm).collect();

    let mut x: Vec<f64> = h.vertices().iter().map(|&v| start_value(v)).collect();
    if deflate_and_normalize(&mut x, &unit_top) == 0.0 {
        x = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        deflate_and_normalize(&mut x, &unit_top);
    }
    let mut y = vec![0.0; n];
    let max_iters = settings.max_iters(n);
    let mut residual = f64::INFINITY;
    for iter in 0..=max_iters {
        apply(h, &sqrt_d, &x, &mut y);
        let value: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        residual = x.iter().zip(&y).map(|(a, b)| (b - value * a).powi(2)).sum::<f64>().sqrt();
        if residual < settings.tolerance {
            return Ok(Eigenpair { value, residual, vector: x, iterations: iter });
        }
        if iter == max_iters {
            break;
        }
        for (a, b) in x.iter_mut().zip(&y) {
            *a -= 0.5 * b;
        }
        deflate_and_normalize(&mut x, &unit_top);
    }
    Err(Error::ConvergenceFailure { iters: max_iters, residual })
}

/// Dense normalized Laplacian of the view.
pub fn dense_laplacian(h: &LoopedGraph) -> DMatrix<f64> {
    let n = h.len();
    let sqrt_d = sqrt_degrees(h);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = h.inner_degree(i) as f64 / (sqrt_d[i] * sqrt_d[i]);
        for &j in h.local_neighbors(i) {
            m[(i, j)] -= 1.0 / (sqrt_d[i] * sqrt_d[j]);
        }
    }
    m
}

/// Second-smallest eigenpair from a full symmetric eigendecomposition.
///
/// The reported residual is `||N v - λ v||` for the returned pair, floored at
/// a multiple of machine precision to cover the solver's backward error.
pub fn second_eigenpair_dense(h: &LoopedGraph) -> Eigenpair {
    let n = h.len();
    assert!(n >= 2, "need at least two vertices");
    let m = dense_laplacian(h);
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let idx = order[1];
    let value = eig.eigenvalues[idx];
    let v = eig.eigenvectors.column(idx).into_owned();
    let r = (&m * &v - &v * value).norm();
    let floor = 64.0 * f64::EPSILON * n as f64;
    Eigenpair { value, residual: r.max(floor), vector: v.iter().copied().collect(), iterations: 0 }
}
