//! Deterministic expander decomposition with per-part certificates.
//!
//! Parts are refined recursively on loop-compensated views, so conductance is
//! always measured against degrees in the whole graph. A part is emitted only
//! once it is certified: by enumeration when small, by a Cheeger bound on the
//! second normalized-Laplacian eigenvalue otherwise, or trivially when it is a
//! single vertex. A part that resists both cutting and certification is
//! broken into singletons, which keeps every downstream guarantee intact at
//! the price of a larger contracted graph.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components, Degrees, LoopedGraph, SimpleGraph, VertexSet};
use crate::spectral::{fiedler_power, second_eigenpair_dense, PowerSettings};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 18;

/// How a part's expansion guarantee was established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Exhaustive,
    Spectral { lambda2_estimate: f64, residual: f64 },
    Singleton,
    Uncertified,
}

impl CertStatus {
    pub fn is_certified(&self) -> bool {
        !matches!(self, CertStatus::Uncertified)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompConfig {
    /// Parts up to this size are searched and certified by enumeration.
    pub exhaustive_limit: usize,
    /// Parts up to this size get a dense eigensolve for certification.
    pub dense_limit: usize,
    pub power: PowerSettings,
}

impl Default for DecompConfig {
    fn default() -> Self {
        DecompConfig { exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT, dense_limit: 512, power: PowerSettings::default() }
    }
}

/// Disjoint parts covering `0..n`, sorted by smallest member.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    parts: Vec<VertexSet>,
    part_of: Vec<usize>,
    cert: Vec<CertStatus>,
}

impl Partition {
    /// Validates and canonicalizes `(part, status)` pairs over `0..n`.
    pub fn new(n: usize, mut parts: Vec<(VertexSet, CertStatus)>) -> Result<Self> {
        parts.retain(|(p, _)| !p.is_empty());
        parts.sort_by_key(|(p, _)| p.min());
        let mut part_of = vec![usize::MAX; n];
        for (idx, (p, _)) in parts.iter().enumerate() {
            for &v in p.ids() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::OverlappingSets(v));
                }
                part_of[v] = idx;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidParams(format!("vertex {v} is not covered by the partition")));
        }
        let (parts, cert) = parts.into_iter().unzip();
        Ok(Partition { parts, part_of, cert })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            parts: (0..n).map(|v| VertexSet::singleton(n, v)).collect(),
            part_of: (0..n).collect(),
            cert: vec![CertStatus::Singleton; n],
        }
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn cert(&self) -> &[CertStatus] {
        &self.cert
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `Σ_i |E(X_i, V \ X_i)|`; every inter-part edge is counted from both sides.
    pub fn crossing_edges(&self, g: &SimpleGraph) -> u64 {
        (0..g.n())
            .map(|v| g.neighbors(v).iter().filter(|&&u| self.part_of[u] != self.part_of[v]).count() as u64)
            .sum()
    }

    /// `(size, count)` pairs, ascending by size.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = BTreeMap::new();
        for p in &self.parts {
            *hist.entry(p.len()).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub phi: f64,
    pub crossing_edges: u64,
    pub part_sizes: Vec<(usize, usize)>,
    pub fallback_count: usize,
    pub recursion_depth: usize,
}

/// A sweep or enumeration cut and its conductance inside the view.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCut {
    pub side: VertexSet,
    pub conductance: f64,
}

/// `cut < phi · min_volume`, with a few ulps of slack so that a product that
/// rounds upward cannot invent a violation.
#[inline]
pub fn below_phi(cut: u64, min_volume: u64, phi: f64) -> bool {
    (cut as f64) < phi * (min_volume as f64) * (1.0 - 4.0 * f64::EPSILON)
}

/// View on `G[X]` in which each vertex gets `deg_G(v) - |E(v, X)|` loop weight,
/// so every vertex keeps its full degree.
pub fn augment_with_loop_weights(g: &SimpleGraph, x: &VertexSet) -> LoopedGraph {
    let ids = x.ids();
    let loops = ids
        .iter()
        .map(|&v| {
            let inside = g.neighbors(v).iter().filter(|u| ids.binary_search(u).is_ok()).count();
            (g.degree(v) - inside) as u64
        })
        .collect();
    LoopedGraph::induced(g, x, loops)
}

/// Sweep over an approximate Fiedler vector; returns the best prefix if its
/// conductance is below `phi`.
pub fn fiedler_sweep(h: &LoopedGraph, phi: f64) -> Result<Option<SweepCut>> {
    fiedler_sweep_with(h, phi, PowerSettings::default())
}

pub fn fiedler_sweep_with(h: &LoopedGraph, phi: f64, settings: PowerSettings) -> Result<Option<SweepCut>> {
    if h.len() < 2 {
        return Err(Error::GraphTooSmall(h.len()));
    }
    let pair = fiedler_power(h, settings)?;
    let embedding: Vec<f64> =
        pair.vector.iter().enumerate().map(|(i, x)| x / (h.local_degree(i) as f64).sqrt()).collect();
    let mut order: Vec<usize> = (0..h.len()).collect();
    // Local order already follows global ids, so ties fall to the smaller id.
    order.sort_by(|&a, &b| embedding[a].total_cmp(&embedding[b]).then(a.cmp(&b)));

    let total = h.total_volume();
    let mut in_prefix = vec![false; h.len()];
    let (mut cut, mut vol) = (0u64, 0u64);
    let mut best: Option<(u64, u64, usize)> = None;
    for (pos, &i) in order[..h.len() - 1].iter().enumerate() {
        let to_prefix = h.local_neighbors(i).iter().filter(|&&j| in_prefix[j]).count() as u64;
        cut = cut + h.inner_degree(i) - 2 * to_prefix;
        vol += h.local_degree(i);
        in_prefix[i] = true;
        let min_vol = vol.min(total - vol);
        let better = match best {
            None => true,
            Some((bc, bv, _)) => (cut as u128) * (bv as u128) < (bc as u128) * (min_vol as u128),
        };
        if better {
            best = Some((cut, min_vol, pos));
        }
    }
    let (cut, min_vol, pos) = best.expect("at least one prefix");
    if !below_phi(cut, min_vol, phi) {
        return Ok(None);
    }
    let side = VertexSet::new(h.universe(), order[..=pos].iter().map(|&i| h.vertices()[i])).expect("view ids in range");
    Ok(Some(SweepCut { side, conductance: cut as f64 / min_vol as f64 }))
}

/// Minimum-conductance side of a small view by enumeration.
fn exhaustive_min_conductance(h: &LoopedGraph) -> (u64, u64, u32) {
    let k = h.len();
    debug_assert!((2..=31).contains(&k));
    let adj: Vec<u32> = (0..k).map(|i| h.local_neighbors(i).iter().fold(0u32, |m, &j| m | 1 << j)).collect();
    let deg: Vec<u64> = (0..k).map(|i| h.local_degree(i)).collect();
    let inner: Vec<u64> = (0..k).map(|i| h.inner_degree(i)).collect();
    let total: u64 = deg.iter().sum();
    let full = (1u32 << k) - 1;
    let (mut mask, mut cut, mut vol) = (0u32, 0u64, 0u64);
    let mut best: Option<(u64, u64, u32)> = None;
    for step in 1u32..(1u32 << k) {
        let v = step.trailing_zeros() as usize;
        let into = (adj[v] & mask).count_ones() as u64;
        if mask >> v & 1 == 0 {
            cut = cut + inner[v] - 2 * into;
            vol += deg[v];
            mask |= 1 << v;
        } else {
            mask &= !(1 << v);
            cut = cut + 2 * into - inner[v];
            vol -= deg[v];
        }
        if mask == full || mask & 1 == 0 {
            // Each side is visited once through its complement containing local 0.
            continue;
        }
        let min_vol = vol.min(total - vol);
        let better = match best {
            None => true,
            Some((bc, bv, bm)) => {
                let lhs = (cut as u128) * (bv as u128);
                let rhs = (bc as u128) * (min_vol as u128);
                lhs < rhs || (lhs == rhs && mask < bm)
            }
        };
        if better {
            best = Some((cut, min_vol, mask));
        }
    }
    best.expect("k >= 2 has a proper side")
}

/// Checks `|E(S, X∖S)| ≥ φ·min(vol_G(S), vol_G(X∖S))` for every proper
/// nonempty `S ⊂ X` by enumeration, straight from `G`'s adjacency.
pub fn certify_exhaustive(g: &SimpleGraph, x: &VertexSet, phi: f64) -> Result<bool> {
    certify_exhaustive_with_limit(g, x, phi, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn certify_exhaustive_with_limit(g: &SimpleGraph, x: &VertexSet, phi: f64, limit: usize) -> Result<bool> {
    let k = x.len();
    if k > limit || k > 31 {
        return Err(Error::TooLarge { size: k, limit });
    }
    if k <= 1 {
        return Ok(true);
    }
    let ids = x.ids();
    let adj: Vec<u32> = ids
        .iter()
        .map(|&v| g.neighbors(v).iter().filter_map(|u| ids.binary_search(u).ok()).fold(0u32, |m, j| m | 1 << j))
        .collect();
    let deg: Vec<u64> = ids.iter().map(|&v| g.degree(v) as u64).collect();
    let total: u64 = deg.iter().sum();
    let full = (1u32 << k) - 1;
    for s in 1..full {
        let mut cut = 0u64;
        let mut vol = 0u64;
        let mut rest = s;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            cut += (adj[i] & !s & full).count_ones() as u64;
            vol += deg[i];
        }
        if below_phi(cut, vol.min(total - vol), phi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cheeger certificate: `Spectral` when `(λ₂ - r) / 2 ≥ φ`.
pub fn certify_spectral(h: &LoopedGraph, phi: f64) -> CertStatus {
    certify_spectral_with(h, phi, &DecompConfig::default())
}

pub fn certify_spectral_with(h: &LoopedGraph, phi: f64, cfg: &DecompConfig) -> CertStatus {
    if phi <= 0.0 {
        // Conductance is never negative; record the vacuous estimate.
        return CertStatus::Spectral { lambda2_estimate: 0.0, residual: 0.0 };
    }
    if h.len() < 2 {
        return CertStatus::Uncertified;
    }
    let pair = if h.len() <= cfg.dense_limit {
        second_eigenpair_dense(h)
    } else {
        match fiedler_power(h, cfg.power) {
            Ok(pair) => pair,
            Err(_) => return CertStatus::Uncertified,
        }
    };
    if (pair.value - pair.residual) / 2.0 >= phi {
        CertStatus::Spectral { lambda2_estimate: pair.value, residual: pair.residual }
    } else {
        CertStatus::Uncertified
    }
}

pub fn expander_decompose(g: &SimpleGraph, phi: f64) -> Result<(Partition, DecompositionReport)> {
    expander_decompose_with(g, phi, &DecompConfig::default())
}

enum Step {
    Done(VertexSet, CertStatus),
    Split(Vec<VertexSet>),
    Fallback(VertexSet),
}

pub fn expander_decompose_with(g: &SimpleGraph, phi: f64, cfg: &DecompConfig) -> Result<(Partition, DecompositionReport)> {
    if !phi.is_finite() || phi < 0.0 {
        return Err(Error::InvalidPhi(phi));
    }
    let n = g.n();
    if phi >= 1.0 {
        let partition = Partition::singletons(n);
        let report = report_for(g, &partition, phi, 0, 0);
        return Ok((partition, report));
    }

    let mut pending: Vec<VertexSet> = components(g);
    let mut finished: Vec<(VertexSet, CertStatus)> = Vec::new();
    let mut fallback_count = 0;
    let mut depth = 0;
    while !pending.is_empty() {
        let steps: Vec<Step> = pending.par_iter().map(|x| refine_step(g, x, phi, cfg)).collect();
        let mut next = Vec::new();
        for step in steps {
            match step {
                Step::Done(x, cert) => finished.push((x, cert)),
                Step::Split(pieces) => next.extend(pieces),
                Step::Fallback(x) => {
                    fallback_count += 1;
                    finished.extend(x.ids().iter().map(|&v| (VertexSet::singleton(n, v), CertStatus::Singleton)));
                }
            }
        }
        if !next.is_empty() {
            depth += 1;
        }
        pending = next;
    }
    let partition = Partition::new(n, finished)?;
    debug_assert!(partition.cert().iter().all(CertStatus::is_certified));
    let report = report_for(g, &partition, phi, fallback_count, depth);
    Ok((partition, report))
}

fn report_for(g: &SimpleGraph, p: &Partition, phi: f64, fallback_count: usize, recursion_depth: usize) -> DecompositionReport {
    DecompositionReport {
        phi,
        crossing_edges: p.crossing_edges(g),
        part_sizes: p.size_histogram(),
        fallback_count,
        recursion_depth,
    }
}

fn refine_step(g: &SimpleGraph, x: &VertexSet, phi: f64, cfg: &DecompConfig) -> Step {
    let n = g.n();
    if x.len() == 1 {
        return Step::Done(x.clone(), CertStatus::Singleton);
    }
    let view = augment_with_loop_weights(g, x);
    let pieces = view_components(&view);
    if pieces.len() > 1 {
        // A disconnected part has a zero-conductance cut.
        return Step::Split(pieces);
    }
    if phi == 0.0 {
        let cert = if x.len() <= cfg.exhaustive_limit {
            CertStatus::Exhaustive
        } else {
            certify_spectral_with(&view, phi, cfg)
        };
        return Step::Done(x.clone(), cert);
    }
    if x.len() <= cfg.exhaustive_limit.min(31) {
        let (cut, min_vol, mask) = exhaustive_min_conductance(&view);
        if below_phi(cut, min_vol, phi) {
            let side: Vec<usize> = (0..x.len()).filter(|&i| mask >> i & 1 == 1).map(|i| x.ids()[i]).collect();
            let side = VertexSet::from_sorted(n, side);
            let rest = VertexSet::from_sorted(n, x.ids().iter().copied().filter(|v| !side.contains(*v)).collect());
            return Step::Split(vec![side, rest]);
        }
        return Step::Done(x.clone(), CertStatus::Exhaustive);
    }
    if let Ok(Some(cut)) = fiedler_sweep_with(&view, phi, cfg.power) {
        let rest = VertexSet::from_sorted(n, x.ids().iter().copied().filter(|v| !cut.side.contains(*v)).collect());
        return Step::Split(vec![cut.side, rest]);
    }
    match certify_spectral_with(&view, phi, cfg) {
        CertStatus::Uncertified => Step::Fallback(x.clone()),
        cert => Step::Done(x.clone(), cert),
    }
}

fn view_components(h: &LoopedGraph) -> Vec<VertexSet> {
    let k = h.len();
    let universe = h.universe();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for root in 0..k {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        let mut comp = Vec::new();
        while let Some(i) = stack.pop() {
            comp.push(h.vertices()[i]);
            for &j in h.local_neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(VertexSet::from_sorted(universe, comp));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::volume;

    fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_edges(n, edges, true).unwrap().0
    }

    fn complete(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        graph(n, &edges)
    }

    fn path(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        graph(n, &edges)
    }

    fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &edges)
    }

    fn full_view(g: &SimpleGraph) -> LoopedGraph {
        augment_with_loop_weights(g, &VertexSet::full(g.n()))
    }

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::new(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn loop_weights() {
        let k5 = complete(5);
        let full = full_view(&k5);
        assert!((0..5).all(|i| full.loop_weight(i) == 0));
        let x = set(5, &[0, 1]);
        let view = augment_with_loop_weights(&k5, &x);
        assert_eq!((view.loop_weight(0), view.loop_weight(1)), (3, 3));
        assert_eq!(volume(&view, &set(5, &[0])).unwrap(), 4);

        let star = graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let view = augment_with_loop_weights(&star, &set(6, &[0, 1]));
        assert_eq!((view.loop_weight(0), view.loop_weight(1)), (4, 0));
    }

    #[test]
    fn sweep_examples() {
        assert_eq!(fiedler_sweep(&full_view(&path(2)), 0.9).unwrap(), None);

        let two_triangles = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let cut = fiedler_sweep(&full_view(&two_triangles), 0.5).unwrap().unwrap();
        assert!(cut.side.ids() == [0, 1, 2] || cut.side.ids() == [3, 4, 5], "{:?}", cut.side);
        assert!((cut.conductance - 1.0 / 7.0).abs() < 1e-12);

        assert_eq!(fiedler_sweep(&full_view(&complete(4)), 0.1).unwrap(), None);
    }

    #[test]
    fn exhaustive_certificates() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        assert!(certify_exhaustive(&g, &set(4, &[2]), 0.9).unwrap());
        assert!(certify_exhaustive(&g, &set(4, &[0, 1]), 0.9).unwrap());
        assert!(!certify_exhaustive(&g, &set(4, &[1, 2]), 0.01).unwrap());
        let big = VertexSet::full(19);
        assert_eq!(certify_exhaustive(&path(19), &big, 0.1).unwrap_err(), Error::TooLarge { size: 19, limit: 18 });
    }

    #[test]
    fn spectral_certificates() {
        match certify_spectral(&full_view(&complete(100)), 0.404) {
            CertStatus::Spectral { lambda2_estimate, residual } => {
                assert!((lambda2_estimate - 100.0 / 99.0).abs() < 1e-9);
                assert!(residual < 1e-8);
            }
            other => panic!("expected spectral certificate, got {other:?}"),
        }
        assert_eq!(certify_spectral(&full_view(&path(10)), 0.4), CertStatus::Uncertified);
        assert!(matches!(certify_spectral(&full_view(&path(10)), 0.0), CertStatus::Spectral { .. }));
    }

    #[test]
    fn invalid_phi() {
        let g = complete(3);
        assert_eq!(expander_decompose(&g, -0.1).unwrap_err(), Error::InvalidPhi(-0.1));
        assert!(matches!(expander_decompose(&g, f64::NAN), Err(Error::InvalidPhi(_))));
    }

    #[test]
    fn phi_zero_gives_components() {
        let g = graph(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)]);
        let (p, report) = expander_decompose(&g, 0.0).unwrap();
        let parts: Vec<&[usize]> = p.parts().iter().map(|s| s.ids()).collect();
        assert_eq!(parts, vec![&[0, 1, 2][..], &[3, 4, 5], &[6]]);
        assert_eq!(report.crossing_edges, 0);
    }

    #[test]
    fn phi_one_gives_singletons() {
        let g = complete(6);
        let (p, report) = expander_decompose(&g, 1.0).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.cert().iter().all(|c| *c == CertStatus::Singleton));
        assert_eq!(report.crossing_edges, 30);
        let (p, _) = expander_decompose(&g, 3.5).unwrap();
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn forced_fallback_keeps_partition_valid() {
        // C_20: best cut conductance is 2/20, Cheeger only certifies ~0.0245.
        let g = cycle(20);
        let cfg = DecompConfig { exhaustive_limit: 0, ..DecompConfig::default() };
        let (p, report) = expander_decompose_with(&g, 0.09, &cfg).unwrap();
        assert_eq!(report.fallback_count, 1);
        assert_eq!(p.len(), 20);
        assert!(p.cert().iter().all(|c| *c == CertStatus::Singleton));
        assert_eq!(report.crossing_edges, 40);
    }

    #[test]
    fn twin_cliques_split_on_planted_cut() {
        let q = 100;
        let mut edges = Vec::new();
        for base in [0, q] {
            for u in 0..q {
                for v in u + 1..q {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.extend((0..10).map(|i| (i, q + i)));
        let g = graph(2 * q, &edges);
        let (p, report) = expander_decompose(&g, 40.0 / 99.0).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.parts()[0].ids(), (0..q).collect::<Vec<_>>().as_slice());
        assert!(p.cert().iter().all(|c| matches!(c, CertStatus::Spectral { .. })));
        assert_eq!(report.crossing_edges, 20);
    }

    #[test]
    fn partition_rejects_overlap_and_gaps() {
        let overlap = vec![(set(3, &[0, 1]), CertStatus::Exhaustive), (set(3, &[1, 2]), CertStatus::Exhaustive)];
        assert_eq!(Partition::new(3, overlap).unwrap_err(), Error::OverlappingSets(1));
        let gap = vec![(set(3, &[0, 1]), CertStatus::Exhaustive)];
        assert!(Partition::new(3, gap).is_err());
    }
}
