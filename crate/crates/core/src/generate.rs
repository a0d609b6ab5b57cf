//! Deterministic graph families.
//!
//! Randomness comes from a counter-based mixer keyed by the seed and the
//! candidate edge's index, so output is identical on every platform.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::spectral::mix64;

fn simple(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    SimpleGraph::from_edges(n, edges, true).expect("generator emits simple edges").0
}

/// Uniform value in `[0, 1)` for candidate `index` under `seed`.
pub fn unit(seed: u64, index: u64) -> f64 {
    (mix64(mix64(seed) ^ index) >> 11) as f64 / (1u64 << 53) as f64
}

/// Two disjoint `K_q` joined by `t` vertex-disjoint edges `(i, q + i)`.
pub fn clique_pair(q: usize, t: usize) -> Result<SimpleGraph> {
    if q == 0 {
        return Err(Error::InvalidParams("clique size must be positive".into()));
    }
    if t > q {
        return Err(Error::InvalidParams(format!("t = {t} exceeds q = {q}: joining edges must be vertex-disjoint")));
    }
    let mut edges = Vec::with_capacity(q * (q - 1) + t);
    for base in [0, q] {
        for u in 0..q {
            for v in u + 1..q {
                edges.push((base + u, base + v));
            }
        }
    }
    edges.extend((0..t).map(|i| (i, q + i)));
    Ok(simple(2 * q, &edges))
}

/// `G(n, p)`: pair `(u, v)` with `u < v` at lexicographic index `i` is an
/// edge iff `unit(seed, i) < p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<SimpleGraph> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p = {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    let mut index = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            if unit(seed, index) < p {
                edges.push((u, v));
            }
            index += 1;
        }
    }
    Ok(simple(n, &edges))
}

pub fn cycle(n: usize) -> Result<SimpleGraph> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    Ok(simple(n, &edges))
}

pub fn hypercube(d: usize) -> Result<SimpleGraph> {
    if d == 0 || d > 24 {
        return Err(Error::InvalidParams(format!("hypercube dimension {d} outside 1..=24")));
    }
    let n = 1usize << d;
    let edges: Vec<_> = (0..n).flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v).collect();
    Ok(simple(n, &edges))
}

/// Clique pair with each intra-clique edge independently deleted with
/// probability `drop`; joining edges are always kept.
pub fn perturbed_clique_pair(q: usize, t: usize, drop: f64, seed: u64) -> Result<SimpleGraph> {
    let base = clique_pair(q, t)?;
    let edges: Vec<_> = base
        .edges()
        .enumerate()
        .filter(|&(i, (u, v))| (u < q) != (v < q) || unit(seed, i as u64) >= drop)
        .map(|(_, e)| e)
        .collect();
    Ok(simple(2 * q, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_pair_counts() {
        let g = clique_pair(100, 10).unwrap();
        assert_eq!((g.n(), g.m()), (200, 9910));
        assert!(clique_pair(5, 7).is_err());
        assert_eq!(clique_pair(5, 5).unwrap().m(), 25);
    }

    #[test]
    fn cycle_and_hypercube() {
        let c = cycle(8).unwrap();
        assert_eq!((c.n(), c.m()), (8, 8));
        let q = hypercube(4).unwrap();
        assert_eq!((q.n(), q.m()), (16, 32));
        assert!(cycle(2).is_err());
    }

    #[test]
    fn gnp_is_reproducible() {
        let a = gnp(40, 0.3, 7).unwrap();
        let b = gnp(40, 0.3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gnp(40, 0.3, 8).unwrap());
        assert_eq!(gnp(10, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gnp(10, 1.0, 1).unwrap().m(), 45);
    }

    #[test]
    fn gnp_frozen_values() {
        // Pins the mixer so corpora stay bit-identical across releases.
        assert_eq!(mix64(0), 0xe220_a839_7b1d_cdaf);
        let g = gnp(12, 0.5, 2024).unwrap();
        assert_eq!(g.m(), 39);
        assert_eq!(g.edges().take(5).collect::<Vec<_>>(), vec![(0, 2), (0, 3), (0, 6), (0, 7), (0, 9)]);
    }
}
