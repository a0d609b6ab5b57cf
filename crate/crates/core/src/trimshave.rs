//! Trimming and shaving of a vertex set against the degrees of the whole graph.
//!
//! `trim` repeatedly drops a vertex whose inside-degree is below two fifths of
//! its degree; `shave` drops, in one pass, every vertex whose inside-degree is
//! at most half its degree plus one. All thresholds are compared in integers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{SimpleGraph, VertexSet};

/// `5·inside < 2·deg`
#[inline]
pub fn trim_removes(inside: usize, degree: usize) -> bool {
    5 * inside < 2 * degree
}

/// `2·inside > deg + 2`
#[inline]
pub fn shave_keeps(inside: usize, degree: usize) -> bool {
    2 * inside > degree + 2
}

/// Largest `T ⊆ S` in which every vertex keeps at least 2/5 of its degree.
pub fn trim(g: &SimpleGraph, s: &VertexSet) -> VertexSet {
    let mut local = LocalSet::new(g, s);
    let mut queued = vec![false; s.len()];
    let mut heap = BinaryHeap::new();
    for i in 0..s.len() {
        if local.removable(i) {
            queued[i] = true;
            heap.push(Reverse(i));
        }
    }
    // Local indices follow ascending global ids, so the heap pops the
    // smallest removable vertex first.
    while let Some(Reverse(i)) = heap.pop() {
        local.remove(i, |j, removable| {
            if removable && !queued[j] {
                queued[j] = true;
                heap.push(Reverse(j));
            }
        });
    }
    local.into_live()
}

/// Trim where `pick` chooses which currently removable vertex goes next.
///
/// `pick` receives the removable vertices in ascending order and returns an
/// index into that slice. The result does not depend on the choices; this
/// entry point exists so tests can check that.
#[doc(hidden)]
pub fn trim_with_picker(g: &SimpleGraph, s: &VertexSet, mut pick: impl FnMut(&[usize]) -> usize) -> VertexSet {
    let mut local = LocalSet::new(g, s);
    loop {
        let candidates: Vec<usize> = (0..s.len()).filter(|&i| local.live[i] && local.removable(i)).collect();
        if candidates.is_empty() {
            break;
        }
        let globals: Vec<usize> = candidates.iter().map(|&i| s.ids()[i]).collect();
        local.remove(candidates[pick(&globals)], |_, _| {});
    }
    local.into_live()
}

/// Vertices of `S` whose inside-degree exceeds half their degree plus one,
/// with inside-degrees measured against `S` itself.
pub fn shave(g: &SimpleGraph, s: &VertexSet) -> VertexSet {
    let local = LocalSet::new(g, s);
    let kept = (0..s.len()).filter(|&i| shave_keeps(local.inside[i], local.degree[i])).map(|i| s.ids()[i]).collect();
    VertexSet::from_sorted(s.universe(), kept)
}

/// `S` indexed locally, with each member's neighbors inside `S` and live
/// inside-degree counters.
struct LocalSet<'a> {
    set: &'a VertexSet,
    adjacency: Vec<Vec<usize>>,
    degree: Vec<usize>,
    inside: Vec<usize>,
    live: Vec<bool>,
}

impl<'a> LocalSet<'a> {
    fn new(g: &SimpleGraph, set: &'a VertexSet) -> Self {
        let ids = set.ids();
        let adjacency: Vec<Vec<usize>> =
            ids.iter().map(|&v| g.neighbors(v).iter().filter_map(|u| ids.binary_search(u).ok()).collect()).collect();
        let inside = adjacency.iter().map(Vec::len).collect();
        let degree = ids.iter().map(|&v| g.degree(v)).collect();
        LocalSet { set, adjacency, degree, inside, live: vec![true; ids.len()] }
    }

    fn removable(&self, i: usize) -> bool {
        trim_removes(self.inside[i], self.degree[i])
    }

    fn remove(&mut self, i: usize, mut touched: impl FnMut(usize, bool)) {
        self.live[i] = false;
        for &j in &self.adjacency[i] {
            if self.live[j] {
                self.inside[j] -= 1;
                touched(j, trim_removes(self.inside[j], self.degree[j]));
            }
        }
    }

    fn into_live(self) -> VertexSet {
        let ids = self.set.ids().iter().zip(&self.live).filter(|(_, &l)| l).map(|(&v, _)| v).collect();
        VertexSet::from_sorted(self.set.universe(), ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimpleGraph::from_edges(n, &edges, true).unwrap().0
    }

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::new(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn trim_whole_vertex_set_is_identity() {
        let g = complete(6);
        assert_eq!(trim(&g, &VertexSet::full(6)), VertexSet::full(6));
    }

    #[test]
    fn trim_k6_small_sets() {
        let g = complete(6);
        assert!(trim(&g, &set(6, &[0, 1])).is_empty());
        assert_eq!(trim(&g, &set(6, &[0, 1, 2, 3])).ids(), &[0, 1, 2, 3]);
        assert!(trim(&g, &VertexSet::empty(6)).is_empty());
    }

    #[test]
    fn trim_cascades() {
        // Q_3, S = path 0-1-3-7: the endpoints go first, which then exposes
        // the middle vertices.
        let edges: Vec<(usize, usize)> =
            (0..8usize).flat_map(|u| (0..3).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v).collect();
        let (g, _) = SimpleGraph::from_edges(8, &edges, true).unwrap();
        assert!(trim(&g, &set(8, &[0, 1, 3, 7])).is_empty());
        assert_eq!(trim(&g, &set(8, &[0, 1, 3, 4, 5])).ids(), &[0, 1, 4, 5]);
    }

    #[test]
    fn shave_k6() {
        let g = complete(6);
        assert_eq!(shave(&g, &VertexSet::full(6)), VertexSet::full(6));
        assert!(shave(&g, &set(6, &[0, 1, 2])).is_empty());
        assert!(shave(&g, &set(6, &[4])).is_empty());
        assert!(shave(&g, &VertexSet::empty(6)).is_empty());
    }

    #[test]
    fn thresholds_are_exact() {
        // deg 5: trim keeps inside 2 (10 >= 10), removes 1.
        assert!(!trim_removes(2, 5));
        assert!(trim_removes(1, 5));
        // deg 4: shave needs inside > 3.
        assert!(!shave_keeps(3, 4));
        assert!(shave_keeps(4, 4));
    }

    #[test]
    fn picker_variant_matches() {
        let g = complete(6);
        let s = set(6, &[0, 1, 2]);
        assert_eq!(trim_with_picker(&g, &s, |c| c.len() - 1), trim(&g, &s));
    }
}
