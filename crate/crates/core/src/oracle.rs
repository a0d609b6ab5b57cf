//! Bounded edge-connectivity oracles.
//!
//! Every backend answers the same question: given a multigraph `H` and a cap
//! `k`, return `min(λ(H), k)`, plus a side achieving the value whenever it is
//! below the cap. [`flow_bounded`] is the pipeline default and only ever pushes
//! `k` units per sink, so its cost is `O(n·m·k)`. [`stoer_wagner`] and
//! [`exhaustive_min_cut`] compute `λ` exactly and serve as cross-checks.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexSet, WeightedAdjacency};

/// Largest graph the exhaustive oracle accepts.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleChoice {
    #[default]
    FlowBounded,
    StoerWagner,
    Exhaustive,
}

impl FromStr for OracleChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "flow" => Ok(OracleChoice::FlowBounded),
            "sw" | "stoer-wagner" => Ok(OracleChoice::StoerWagner),
            "exhaustive" => Ok(OracleChoice::Exhaustive),
            other => Err(format!("unknown oracle `{other}` (expected flow, sw or exhaustive)")),
        }
    }
}

/// Answer of a capped query. `side` is present exactly when `value < k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedCut {
    pub value: u64,
    pub side: Option<VertexSet>,
}

/// Exact global minimum cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: u64,
    pub side: VertexSet,
}

pub fn bounded_edge_connectivity(h: &MultiGraph, k: u64, which: OracleChoice) -> Result<BoundedCut> {
    match which {
        OracleChoice::FlowBounded => flow_bounded(h, k),
        OracleChoice::StoerWagner => Ok(cap(stoer_wagner(h)?, k)),
        OracleChoice::Exhaustive => Ok(cap(exhaustive_min_cut(h)?, k)),
    }
}

fn cap(cut: MinCut, k: u64) -> BoundedCut {
    if cut.value < k {
        BoundedCut { value: cut.value, side: Some(cut.side) }
    } else {
        BoundedCut { value: k, side: None }
    }
}

fn check_size(h: &MultiGraph) -> Result<()> {
    if h.n() < 2 {
        return Err(Error::GraphTooSmall(h.n()));
    }
    Ok(())
}

/// Residual network of an undirected multigraph. Arc `2e` and `2e + 1` are
/// the two directions of edge `e`, each with the edge's multiplicity as
/// capacity, and each other's reverse.
struct Residual {
    head: Vec<usize>,
    cap: Vec<u64>,
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(h: &MultiGraph) -> Self {
        let n = h.n();
        let mut head = Vec::new();
        let mut cap = Vec::new();
        let mut out = vec![Vec::new(); n];
        for u in 0..n {
            for &(v, w) in h.neighbors(u) {
                if u < v {
                    out[u].push(head.len());
                    head.push(v);
                    cap.push(w);
                    out[v].push(head.len());
                    head.push(u);
                    cap.push(w);
                }
            }
        }
        Residual { head, cap, out }
    }

    /// Shortest augmenting paths from `s` to `t`, stopping once `limit` units flow.
    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let n = self.out.len();
        let mut flow = 0;
        let mut parent_arc = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        while flow < limit {
            parent_arc.iter_mut().for_each(|p| *p = usize::MAX);
            queue.clear();
            queue.push_back(s);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.out[u] {
                    let v = self.head[a];
                    if self.cap[a] > 0 && v != s && parent_arc[v] == usize::MAX {
                        parent_arc[v] = a;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !reached {
                break;
            }
            let mut bottleneck = limit - flow;
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                bottleneck = bottleneck.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                v = self.head[a ^ 1];
            }
            flow += bottleneck;
        }
        flow
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.out[u] {
                let v = self.head[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// `min(λ(H), k)` by `k`-capped max-flow from vertex 0 to every other vertex.
pub fn flow_bounded(h: &MultiGraph, k: u64) -> Result<BoundedCut> {
    check_size(h)?;
    let base = Residual::new(h);
    let (value, t) = (1..h.n())
        .into_par_iter()
        .map(|t| {
            let mut r = Residual { head: base.head.clone(), cap: base.cap.clone(), out: base.out.clone() };
            (r.max_flow(0, t, k), t)
        })
        .min()
        .expect("at least one sink");
    if value >= k {
        return Ok(BoundedCut { value: k, side: None });
    }
    let mut r = Residual::new(h);
    r.max_flow(0, t, k);
    let side = VertexSet::from_mask(&r.reachable_from(0));
    Ok(BoundedCut { value, side: Some(side) })
}

/// Exact minimum cut by maximum-adjacency phases.
///
/// Each phase starts from the smallest active vertex; ties among equally
/// connected candidates go to the smaller id.
pub fn stoer_wagner(h: &MultiGraph) -> Result<MinCut> {
    check_size(h)?;
    let n = h.n();
    let mut adjacency: Vec<BTreeMap<usize, u64>> = (0..n).map(|v| h.neighbors(v).iter().copied().collect()).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;

    let mut key = vec![0u64; n];
    let mut added = vec![false; n];
    while active.len() > 1 {
        for &v in &active {
            key[v] = 0;
            added[v] = false;
        }
        let mut heap: BinaryHeap<(u64, Reverse<usize>)> = BinaryHeap::new();
        let mut next_idle = 0;
        let mut order = Vec::with_capacity(active.len());
        let mut last_key = 0;
        while order.len() < active.len() {
            let v = loop {
                match heap.pop() {
                    Some((k, Reverse(v))) if !added[v] && k == key[v] => break Some((k, v)),
                    Some(_) => continue,
                    None => break None,
                }
            };
            let (k, v) = match v {
                Some(found) => found,
                None => {
                    // Remaining vertices are unreachable from the set built so far.
                    while added[active[next_idle]] {
                        next_idle += 1;
                    }
                    (0, active[next_idle])
                }
            };
            added[v] = true;
            order.push(v);
            last_key = k;
            for (&u, &w) in &adjacency[v] {
                if !added[u] {
                    key[u] += w;
                    heap.push((key[u], Reverse(u)));
                }
            }
        }
        let t = order[order.len() - 1];
        let s = order[order.len() - 2];
        if best.as_ref().is_none_or(|(b, _)| last_key < *b) {
            let mut side = members[t].clone();
            side.sort_unstable();
            best = Some((last_key, side));
        }
        let t_edges = std::mem::take(&mut adjacency[t]);
        for (u, w) in t_edges {
            adjacency[u].remove(&t);
            if u != s {
                *adjacency[s].entry(u).or_insert(0) += w;
                *adjacency[u].entry(s).or_insert(0) += w;
            }
        }
        adjacency[s].remove(&t);
        let moved = std::mem::take(&mut members[t]);
        members[s].extend(moved);
        active.retain(|&v| v != t);
    }
    let (value, side) = best.expect("n >= 2 runs at least one phase");
    Ok(MinCut { value, side: VertexSet::from_sorted(n, side) })
}

/// Visits every proper side containing vertex 0, passing its bitmask and cut weight.
///
/// Sides are produced in Gray-code order over vertices `1..n`.
pub fn for_each_cut(h: &MultiGraph, mut visit: impl FnMut(u32, u64)) -> Result<()> {
    check_size(h)?;
    let n = h.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveTooLarge { n, limit: EXHAUSTIVE_LIMIT });
    }
    let mut weight = vec![vec![0u64; n]; n];
    for u in 0..n {
        for &(v, w) in h.neighbors(u) {
            weight[u][v] = w;
        }
    }
    let degree: Vec<u64> = (0..n).map(|v| h.weighted_degree(v)).collect();
    // into_side[x] = total weight from x into the current side
    let mut into_side = weight[0].clone();
    let mut mask: u32 = 1;
    let mut cut = degree[0];
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    visit(mask, cut);
    for step in 1u32..(1u32 << (n - 1)) {
        let v = step.trailing_zeros() as usize + 1;
        let bit = 1u32 << v;
        if mask & bit == 0 {
            cut = cut + degree[v] - 2 * into_side[v];
            mask |= bit;
            for x in 0..n {
                into_side[x] += weight[v][x];
            }
        } else {
            mask &= !bit;
            for x in 0..n {
                into_side[x] -= weight[v][x];
            }
            cut = cut + 2 * into_side[v] - degree[v];
        }
        if mask != full {
            visit(mask, cut);
        }
    }
    Ok(())
}

/// Ground-truth minimum cut by enumeration; `n ≤ 20`.
pub fn exhaustive_min_cut(h: &MultiGraph) -> Result<MinCut> {
    let mut best: Option<(u64, u32)> = None;
    for_each_cut(h, |mask, cut| {
        if best.is_none_or(|(b, _)| cut < b) {
            best = Some((cut, mask));
        }
    })?;
    let (value, mask) = best.expect("n >= 2 has a proper side");
    Ok(MinCut { value, side: side_from_mask(h.n(), mask) })
}

/// Every minimum cut, as the side containing vertex 0; `n ≤ 20`.
pub fn all_min_cuts(h: &MultiGraph) -> Result<(u64, Vec<VertexSet>)> {
    let mut best = u64::MAX;
    let mut masks = Vec::new();
    for_each_cut(h, |mask, cut| {
        if cut < best {
            best = cut;
            masks.clear();
        }
        if cut == best {
            masks.push(mask);
        }
    })?;
    masks.sort_unstable();
    Ok((best, masks.into_iter().map(|m| side_from_mask(h.n(), m)).collect()))
}

fn side_from_mask(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_sorted(n, (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cut_size, SimpleGraph};

    fn multi(n: usize, edges: &[(usize, usize)]) -> MultiGraph {
        MultiGraph::from_simple(&SimpleGraph::from_edges(n, edges, true).unwrap().0)
    }

    fn cycle(n: usize) -> MultiGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        multi(n, &edges)
    }

    fn complete(n: usize) -> MultiGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        multi(n, &edges)
    }

    fn two_triangles_bridge() -> MultiGraph {
        multi(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    }

    fn twin_k5(t: usize) -> MultiGraph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for u in 0..5 {
                for v in u + 1..5 {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.extend((0..t).map(|i| (i, 5 + i)));
        multi(10, &edges)
    }

    fn assert_side(h: &MultiGraph, cut: &BoundedCut) {
        if let Some(side) = &cut.side {
            assert!(!side.is_empty() && side.len() < h.n());
            assert_eq!(cut_size(h, side, &side.complement()).unwrap(), cut.value);
        }
    }

    #[test]
    fn cycle_with_caps() {
        let c8 = cycle(8);
        for which in [OracleChoice::FlowBounded, OracleChoice::StoerWagner, OracleChoice::Exhaustive] {
            let r = bounded_edge_connectivity(&c8, 5, which).unwrap();
            assert_eq!(r.value, 2);
            assert!(r.side.is_some());
            assert_side(&c8, &r);
            let r = bounded_edge_connectivity(&c8, 2, which).unwrap();
            assert_eq!(r, BoundedCut { value: 2, side: None });
        }
    }

    #[test]
    fn two_vertex_multigraph() {
        let h = MultiGraph::from_weighted_edges(2, &[(0, 1, 3)], vec![0, 1]).unwrap();
        for which in [OracleChoice::FlowBounded, OracleChoice::StoerWagner, OracleChoice::Exhaustive] {
            assert_eq!(bounded_edge_connectivity(&h, 10, which).unwrap().value, 3);
        }
    }

    #[test]
    fn flow_examples() {
        let h = two_triangles_bridge();
        let r = flow_bounded(&h, 5).unwrap();
        assert_eq!(r.value, 1);
        assert_side(&h, &r);
        assert_eq!(flow_bounded(&complete(5), 3).unwrap(), BoundedCut { value: 3, side: None });
        let disconnected = multi(4, &[(0, 1), (2, 3)]);
        let r = flow_bounded(&disconnected, 7).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.side.unwrap().ids(), &[0, 1]);
    }

    #[test]
    fn stoer_wagner_examples() {
        assert_eq!(stoer_wagner(&multi(4, &[(0, 1), (1, 2), (2, 3)])).unwrap().value, 1);
        assert_eq!(stoer_wagner(&complete(4)).unwrap().value, 3);
        let h = twin_k5(3);
        let cut = stoer_wagner(&h).unwrap();
        assert_eq!(cut.value, 3);
        assert_eq!(exhaustive_min_cut(&h).unwrap().value, 3);
        assert_eq!(cut_size(&h, &cut.side, &cut.side.complement()).unwrap(), 3);
        let disconnected = multi(5, &[(0, 1), (1, 2), (3, 4)]);
        assert_eq!(stoer_wagner(&disconnected).unwrap().value, 0);
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(exhaustive_min_cut(&complete(3)).unwrap().value, 2);
        assert_eq!(exhaustive_min_cut(&multi(2, &[(0, 1)])).unwrap().value, 1);
        // 4-cycle 0-1-2-3 with chord 0-2
        let h = multi(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert_eq!(exhaustive_min_cut(&h).unwrap().value, 2);
        let (value, sides) = all_min_cuts(&h).unwrap();
        assert_eq!(value, 2);
        // {0,1,2} | {3} and {0,2,3} | {1}
        assert_eq!(sides.len(), 2);
    }

    #[test]
    fn size_errors() {
        let single = MultiGraph::from_weighted_edges(1, &[], vec![0]).unwrap();
        assert_eq!(flow_bounded(&single, 3).unwrap_err(), Error::GraphTooSmall(1));
        assert_eq!(stoer_wagner(&single).unwrap_err(), Error::GraphTooSmall(1));
        assert!(matches!(exhaustive_min_cut(&cycle(21)), Err(Error::ExhaustiveTooLarge { n: 21, .. })));
    }
}
