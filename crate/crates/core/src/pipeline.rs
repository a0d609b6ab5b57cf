//! End-to-end edge connectivity: decompose, trim, shave, contract, then ask a
//! bounded oracle about the contracted graph and return `min(λ', δ)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{expander_decompose_with, DecompConfig, DecompositionReport, Partition};
use crate::error::{Error, Result};
use crate::graph::{components, cut_size, MultiGraph, SimpleGraph, VertexSet};
use crate::oracle::{bounded_edge_connectivity, OracleChoice};
use crate::trimshave::{shave, trim};

/// Numerator of the conductance parameter `φ = PHI_NUMERATOR / δ`.
pub const PHI_NUMERATOR: f64 = 40.0;

/// Minimum degree at or below which `φ ≥ 1` and decomposition is trivial.
pub const TRIVIAL_DEGREE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub oracle: OracleChoice,
    pub decomp: DecompConfig,
}

/// Edge connectivity together with a side achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub lambda: u64,
    pub side: Option<VertexSet>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub decompose: f64,
    pub trim_shave: f64,
    pub contract: f64,
    pub oracle: f64,
    pub total: f64,
}

/// Everything measured along the way. `phi` and `decomposition` are `None`
/// for disconnected inputs, which are answered before decomposition runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineReport {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub phi: Option<f64>,
    pub decomposition: Option<DecompositionReport>,
    pub trimmed_vertices: usize,
    pub shaved_vertices: usize,
    pub contracted_n: usize,
    pub contracted_m: u64,
    pub lambda_prime: u64,
    pub answer: u64,
    pub timings_ms: StageTimings,
}

/// Contracts every nonempty set of `family` into one vertex.
///
/// Contracted vertices are numbered by the smallest original vertex they
/// contain, so original vertex 0 always lands on vertex 0.
pub fn contract(g: &SimpleGraph, family: &[VertexSet]) -> Result<MultiGraph> {
    let n = g.n();
    let mut group = vec![usize::MAX; n];
    for (idx, set) in family.iter().enumerate() {
        for &v in set.ids() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if group[v] != usize::MAX {
                return Err(Error::OverlappingFamily(v));
            }
            group[v] = idx;
        }
    }
    let mut label_of_group = vec![usize::MAX; family.len()];
    let mut origin_map = vec![0usize; n];
    let mut next = 0;
    for v in 0..n {
        origin_map[v] = match group[v] {
            usize::MAX => {
                next += 1;
                next - 1
            }
            gi => {
                if label_of_group[gi] == usize::MAX {
                    label_of_group[gi] = next;
                    next += 1;
                }
                label_of_group[gi]
            }
        };
    }
    let edges: Vec<(usize, usize, u64)> = g.edges().map(|(u, v)| (origin_map[u], origin_map[v], 1)).collect();
    MultiGraph::from_weighted_edges(next, &edges, origin_map)
}

pub fn edge_connectivity(g: &SimpleGraph) -> Result<(CutResult, PipelineReport)> {
    edge_connectivity_with(g, &PipelineConfig::default())
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn edge_connectivity_with(g: &SimpleGraph, cfg: &PipelineConfig) -> Result<(CutResult, PipelineReport)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::GraphTooSmall(n));
    }
    let start = Instant::now();
    let delta = g.min_degree();
    let comps = components(g);
    if comps.len() > 1 {
        let report = PipelineReport {
            n,
            m: g.m(),
            delta,
            phi: None,
            decomposition: None,
            trimmed_vertices: 0,
            shaved_vertices: 0,
            contracted_n: n,
            contracted_m: g.m() as u64,
            lambda_prime: 0,
            answer: 0,
            timings_ms: StageTimings { total: ms(start), ..StageTimings::default() },
        };
        let side = comps.into_iter().next();
        return Ok((CutResult { lambda: 0, side }, report));
    }

    let phi = PHI_NUMERATOR / delta as f64;
    let t = Instant::now();
    let (partition, decomposition) = expander_decompose_with(g, phi, &cfg.decomp)?;
    let decompose_ms = ms(t);

    let t = Instant::now();
    let (trimmed, shaved) = trim_and_shave(g, &partition);
    let trim_shave_ms = ms(t);
    let trimmed_vertices = n - trimmed.iter().map(VertexSet::len).sum::<usize>();
    let shaved_vertices = trimmed.iter().map(VertexSet::len).sum::<usize>() - shaved.iter().map(VertexSet::len).sum::<usize>();

    let t = Instant::now();
    let contracted = contract(g, &shaved)?;
    let contract_ms = ms(t);

    let t = Instant::now();
    let k = if delta <= TRIVIAL_DEGREE { delta as u64 } else { delta as u64 + 1 };
    let (lambda_prime, oracle_side) = if contracted.n() < 2 {
        // Everything collapsed into one vertex: no cut of G' exists.
        (k, None)
    } else {
        let bounded = bounded_edge_connectivity(&contracted, k, cfg.oracle)?;
        (bounded.value, bounded.side)
    };
    let oracle_ms = ms(t);

    let answer = lambda_prime.min(delta as u64);
    let side = match oracle_side {
        Some(side) if lambda_prime < delta as u64 => contracted.expand(&side),
        _ => VertexSet::singleton(n, g.min_degree_vertex()),
    };
    let report = PipelineReport {
        n,
        m: g.m(),
        delta,
        phi: Some(phi),
        decomposition: Some(decomposition),
        trimmed_vertices,
        shaved_vertices,
        contracted_n: contracted.n(),
        contracted_m: contracted.total_weight(),
        lambda_prime,
        answer,
        timings_ms: StageTimings {
            decompose: decompose_ms,
            trim_shave: trim_shave_ms,
            contract: contract_ms,
            oracle: oracle_ms,
            total: ms(start),
        },
    };
    debug_assert_eq!(report.answer, report.lambda_prime.min(report.delta as u64));
    Ok((CutResult { lambda: answer, side: Some(side) }, report))
}

/// `X' = trim(X)` and `X'' = shave(X')` for every part, in part order.
pub fn trim_and_shave(g: &SimpleGraph, partition: &Partition) -> (Vec<VertexSet>, Vec<VertexSet>) {
    partition
        .parts()
        .par_iter()
        .map(|x| {
            let trimmed = trim(g, x);
            let shaved = shave(g, &trimmed);
            (trimmed, shaved)
        })
        .unzip()
}

/// Recounts the edges across `cut.side` and compares with `cut.lambda`.
pub fn verify_cut(g: &SimpleGraph, cut: &CutResult) -> bool {
    let Some(side) = &cut.side else { return false };
    if side.is_empty() || side.len() >= g.n() || side.universe() != g.n() {
        return false;
    }
    cut_size(g, side, &side.complement()).is_ok_and(|w| w == cut.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedAdjacency;

    fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_edges(n, edges, true).unwrap().0
    }

    fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &edges)
    }

    fn complete(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        graph(n, &edges)
    }

    fn clique_pair(q: usize, t: usize) -> SimpleGraph {
        let mut edges = Vec::new();
        for base in [0, q] {
            for u in 0..q {
                for v in u + 1..q {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.extend((0..t).map(|i| (i, q + i)));
        graph(2 * q, &edges)
    }

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::new(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn identity_contraction() {
        let g = cycle(5);
        let h = contract(&g, &[]).unwrap();
        assert_eq!(h.n(), 5);
        assert_eq!(h.total_weight(), 5);
        assert!((0..5).all(|v| h.weighted_neighbors(v).all(|(_, w)| w == 1)));
        let h = contract(&g, &[VertexSet::empty(5)]).unwrap();
        assert_eq!(h.n(), 5);
    }

    #[test]
    fn triangle_contraction_merges_parallel_edges() {
        let g = complete(3);
        let h = contract(&g, &[set(3, &[0, 1])]).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.multiplicity(0, 1), 2);
        assert_eq!(h.origin_map(), &[0, 0, 1]);
    }

    #[test]
    fn clique_pair_contraction() {
        let g = clique_pair(5, 3);
        let h = contract(&g, &[set(10, &[0, 1, 2, 3, 4]), set(10, &[5, 6, 7, 8, 9])]).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.multiplicity(0, 1), 3);
        assert_eq!(h.total_weight(), 3);
    }

    #[test]
    fn overlapping_family_rejected() {
        let g = complete(4);
        let err = contract(&g, &[set(4, &[0, 1]), set(4, &[1, 2])]).unwrap_err();
        assert_eq!(err, Error::OverlappingFamily(1));
    }

    #[test]
    fn cycle_and_clique() {
        let (cut, report) = edge_connectivity(&cycle(8)).unwrap();
        assert_eq!(cut.lambda, 2);
        assert!(verify_cut(&cycle(8), &cut));
        assert_eq!(report.answer, 2);
        let (cut, report) = edge_connectivity(&complete(10)).unwrap();
        assert_eq!((cut.lambda, report.delta), (9, 9));
        assert_eq!(cut.side.as_ref().unwrap().len(), 1);
    }

    #[test]
    fn planted_cut_goes_through_contraction() {
        let g = clique_pair(100, 10);
        let (cut, report) = edge_connectivity(&g).unwrap();
        assert_eq!(cut.lambda, 10);
        assert_eq!(report.delta, 99);
        assert_eq!(report.lambda_prime, 10);
        assert_eq!(report.contracted_n, 2);
        assert_eq!(report.contracted_m, 10);
        assert!(verify_cut(&g, &cut));
        assert_eq!(cut.side.unwrap().len(), 100);
    }

    #[test]
    fn disconnected_input() {
        let g = graph(5, &[(0, 1), (1, 2), (3, 4)]);
        let (cut, report) = edge_connectivity(&g).unwrap();
        assert_eq!(cut.lambda, 0);
        assert_eq!(cut.side.as_ref().unwrap().ids(), &[0, 1, 2]);
        assert!(verify_cut(&g, &cut));
        assert_eq!(report.phi, None);
    }

    #[test]
    fn too_small() {
        let g = graph(1, &[]);
        assert_eq!(edge_connectivity(&g).unwrap_err(), Error::GraphTooSmall(1));
    }

    #[test]
    fn verify_cut_examples() {
        let c8 = cycle(8);
        assert!(verify_cut(&c8, &CutResult { lambda: 2, side: Some(set(8, &[2, 3, 4])) }));
        assert!(!verify_cut(&c8, &CutResult { lambda: 2, side: Some(set(8, &[0, 2, 4, 6])) }));
        assert!(verify_cut(&complete(4), &CutResult { lambda: 3, side: Some(set(4, &[0])) }));
        assert!(!verify_cut(&c8, &CutResult { lambda: 0, side: None }));
    }
}
