//! Graph representations and the cut/volume primitives shared by every stage.
//!
//! [`SimpleGraph`] is the input world: undirected, loop-free, no parallel
//! edges, stored in CSR form with sorted neighbor lists. [`MultiGraph`] is the
//! contracted world, where parallel edges collapse into integer
//! multiplicities. [`LoopedGraph`] is an induced view that keeps every
//! vertex's global degree by attaching loop weight, so volumes measured inside
//! the view agree with volumes in the full graph.

use crate::error::{Error, Result, Violation};

/// Read access to an undirected graph with integer edge weights.
///
/// Simple graphs report weight 1 for every edge.
pub trait WeightedAdjacency {
    fn vertex_count(&self) -> usize;
    fn weighted_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_;

    fn weighted_degree(&self, v: usize) -> u64 {
        self.weighted_neighbors(v).map(|(_, w)| w).sum()
    }
}

/// Per-vertex degree as used for volumes.
pub trait Degrees {
    fn universe(&self) -> usize;
    /// Degree of global vertex `v`, or `None` when `v` is not part of the graph.
    fn degree_of(&self, v: usize) -> Option<u64>;
}

/// Sorted, duplicate-free set of vertex ids drawn from `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    ids: Vec<usize>,
}

impl VertexSet {
    /// Builds a set from arbitrary ids; duplicates collapse.
    pub fn new(universe: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        if let Some(&bad) = ids.iter().find(|&&v| v >= universe) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: universe });
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(VertexSet { universe, ids })
    }

    pub(crate) fn from_sorted(universe: usize, ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(ids.last().is_none_or(|&v| v < universe));
        VertexSet { universe, ids }
    }

    pub fn empty(universe: usize) -> Self {
        VertexSet { universe, ids: Vec::new() }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { universe, ids: (0..universe).collect() }
    }

    pub fn singleton(universe: usize, v: usize) -> Self {
        assert!(v < universe);
        VertexSet { universe, ids: vec![v] }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        let ids = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        VertexSet { universe: mask.len(), ids }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn into_ids(self) -> Vec<usize> {
        self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn min(&self) -> Option<usize> {
        self.ids.first().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    /// Membership bitmap over the whole universe.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &v in &self.ids {
            mask[v] = true;
        }
        mask
    }

    pub fn complement(&self) -> VertexSet {
        let mask = self.mask();
        let ids = (0..self.universe).filter(|&v| !mask[v]).collect();
        VertexSet { universe: self.universe, ids }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// First common element, if any.
    pub fn first_common(&self, other: &VertexSet) -> Option<usize> {
        let (mut i, mut j) = (0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(self.ids[i]),
            }
        }
        None
    }
}

/// Counts of input edges dropped while building a graph in lenient mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub duplicates: usize,
    pub self_loops: usize,
}

/// Immutable undirected simple graph in CSR form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SimpleGraph {
    /// Builds a graph on `n` vertices.
    ///
    /// In strict mode the first duplicate edge or self-loop is an error. In
    /// lenient mode they are dropped and counted in the returned report.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], strict: bool) -> Result<(Self, BuildReport)> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut report = BuildReport::default();
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                if strict {
                    return Err(Error::StrictViolation { kind: Violation::SelfLoop, u, v });
                }
                report.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v), (u, v)));
        }
        pairs.sort_unstable_by_key(|&(a, b, _)| (a, b));
        let mut unique: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
        for &(a, b, (u, v)) in &pairs {
            if unique.last() == Some(&(a, b)) {
                if strict {
                    return Err(Error::StrictViolation { kind: Violation::DuplicateEdge, u, v });
                }
                report.duplicates += 1;
            } else {
                unique.push((a, b));
            }
        }
        Ok((Self::from_unique_sorted(n, &unique), report))
    }

    fn from_unique_sorted(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; 2 * edges.len()];
        // Edges are sorted by (min, max), so writing both directions in this
        // order leaves every neighbor list ascending.
        for &(u, v) in edges {
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        let g = SimpleGraph { offsets, targets };
        debug_assert!((0..n).all(|v| g.neighbors(v).windows(2).all(|w| w[0] < w[1])));
        g
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Number of neighbors of `v` inside the set described by `mask`.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.neighbors(v).iter().filter(|&&u| mask[u]).count()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Smallest-id vertex attaining the minimum degree.
    pub fn min_degree_vertex(&self) -> usize {
        (0..self.n()).min_by_key(|&v| (self.degree(v), v)).unwrap_or(0)
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edges_inside(&self, s: &VertexSet) -> usize {
        let mask = s.mask();
        s.ids().iter().map(|&v| self.degree_into(v, &mask)).sum::<usize>() / 2
    }
}

/// Builds a simple graph whose vertex count is one more than the largest id.
pub fn build_simple_graph(edges: &[(usize, usize)], strict: bool) -> Result<(SimpleGraph, BuildReport)> {
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    SimpleGraph::from_edges(n, edges, strict)
}

impl WeightedAdjacency for SimpleGraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn weighted_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.neighbors(v).iter().map(|&u| (u, 1))
    }

    fn weighted_degree(&self, v: usize) -> u64 {
        self.degree(v) as u64
    }
}

impl Degrees for SimpleGraph {
    fn universe(&self) -> usize {
        self.n()
    }

    fn degree_of(&self, v: usize) -> Option<u64> {
        (v < self.n()).then(|| self.degree(v) as u64)
    }
}

/// Undirected multigraph with integer multiplicities and no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    adjacency: Vec<Vec<(usize, u64)>>,
    origin_map: Vec<usize>,
}

impl MultiGraph {
    /// Builds from weighted edges; parallel edges merge and loops are dropped.
    ///
    /// `origin_map[v]` names the vertex of this graph that original vertex `v`
    /// was mapped to.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, u64)], origin_map: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if let Some(&bad) = origin_map.iter().find(|&&c| c >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        let mut pairs: Vec<(usize, usize, u64)> = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v && w > 0 {
                pairs.push((u.min(v), u.max(v), w));
            }
        }
        pairs.sort_unstable_by_key(|&(a, b, _)| (a, b));
        let mut adjacency = vec![Vec::new(); n];
        let mut i = 0;
        while i < pairs.len() {
            let (a, b, mut w) = pairs[i];
            i += 1;
            while i < pairs.len() && pairs[i].0 == a && pairs[i].1 == b {
                w += pairs[i].2;
                i += 1;
            }
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(u, _)| u);
        }
        Ok(MultiGraph { adjacency, origin_map })
    }

    /// Copy of a simple graph with every multiplicity 1 and the identity origin map.
    pub fn from_simple(g: &SimpleGraph) -> Self {
        let adjacency = (0..g.n()).map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect()).collect();
        MultiGraph { adjacency, origin_map: (0..g.n()).collect() }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of distinct adjacent pairs.
    pub fn distinct_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Number of edges counting multiplicities.
    pub fn total_weight(&self) -> u64 {
        self.adjacency.iter().flatten().map(|&(_, w)| w).sum::<u64>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adjacency[v]
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        match self.adjacency[u].binary_search_by_key(&v, |&(x, _)| x) {
            Ok(i) => self.adjacency[u][i].1,
            Err(_) => 0,
        }
    }

    pub fn origin_map(&self) -> &[usize] {
        &self.origin_map
    }

    /// Original vertices grouped by the vertex they were mapped to.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.n()];
        for (orig, &c) in self.origin_map.iter().enumerate() {
            groups[c].push(orig);
        }
        groups
    }

    /// Pulls a vertex set of this graph back to the original vertex ids.
    pub fn expand(&self, side: &VertexSet) -> VertexSet {
        let mask = side.mask();
        let ids = self.origin_map.iter().enumerate().filter(|(_, &c)| mask[c]).map(|(v, _)| v).collect();
        VertexSet::from_sorted(self.origin_map.len(), ids)
    }
}

impl WeightedAdjacency for MultiGraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn weighted_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.adjacency[v].iter().copied()
    }
}

/// `|E(A, B)|`, counting multiplicities.
pub fn cut_size<G: WeightedAdjacency>(g: &G, a: &VertexSet, b: &VertexSet) -> Result<u64> {
    let n = g.vertex_count();
    for s in [a, b] {
        if let Some(&bad) = s.ids().iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
    }
    if let Some(v) = a.first_common(b) {
        return Err(Error::OverlappingSets(v));
    }
    let in_b = b.mask();
    let mut total = 0;
    for &v in a.ids() {
        total += g.weighted_neighbors(v).filter(|&(u, _)| in_b.get(u).copied().unwrap_or(false)).map(|(_, w)| w).sum::<u64>();
    }
    Ok(total)
}

/// Weight of edges leaving `s`.
pub fn boundary<G: WeightedAdjacency>(g: &G, s: &VertexSet) -> u64 {
    let mask = s.mask();
    s.ids()
        .iter()
        .map(|&v| g.weighted_neighbors(v).filter(|&(u, _)| !mask[u]).map(|(_, w)| w).sum::<u64>())
        .sum()
}

/// Sum of degrees over `s`.
pub fn volume<G: Degrees>(g: &G, s: &VertexSet) -> Result<u64> {
    let mut total = 0;
    for &v in s.ids() {
        total += g.degree_of(v).ok_or(Error::VertexOutOfRange { vertex: v, n: g.universe() })?;
    }
    Ok(total)
}

pub fn min_degree(g: &SimpleGraph) -> usize {
    g.min_degree()
}

/// Connected components, each sorted, listed by ascending smallest vertex.
pub fn components<G: WeightedAdjacency>(g: &G) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push(root);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for (u, _) in g.weighted_neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(VertexSet::from_sorted(n, comp));
    }
    out
}

pub fn is_connected<G: WeightedAdjacency>(g: &G) -> bool {
    components(g).len() <= 1
}

/// Induced view on a vertex subset where each vertex carries extra loop
/// weight counted toward its degree.
///
/// Internally the view is indexed locally (`0..len`) in ascending order of
/// the global ids it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopedGraph {
    universe: usize,
    vertices: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    loop_weight: Vec<u64>,
}

impl LoopedGraph {
    /// Restricts `g` to `subset` and attaches the given per-vertex loop
    /// weights (indexed like `subset.ids()`).
    pub fn induced(g: &SimpleGraph, subset: &VertexSet, loop_weight: Vec<u64>) -> Self {
        assert_eq!(loop_weight.len(), subset.len());
        let vertices = subset.ids().to_vec();
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in &vertices {
            for &u in g.neighbors(v) {
                if let Ok(local) = vertices.binary_search(&u) {
                    targets.push(local);
                }
            }
            offsets.push(targets.len());
        }
        LoopedGraph { universe: g.n(), vertices, offsets, targets, loop_weight }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Global ids covered by the view, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn local_of(&self, global: usize) -> Option<usize> {
        self.vertices.binary_search(&global).ok()
    }

    /// Local neighbor indices of local vertex `i`.
    pub fn local_neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Degree inside the view, excluding loops.
    pub fn inner_degree(&self, i: usize) -> u64 {
        (self.offsets[i + 1] - self.offsets[i]) as u64
    }

    pub fn loop_weight(&self, i: usize) -> u64 {
        self.loop_weight[i]
    }

    /// Inner degree plus loop weight.
    pub fn local_degree(&self, i: usize) -> u64 {
        self.inner_degree(i) + self.loop_weight[i]
    }

    pub fn total_volume(&self) -> u64 {
        (0..self.len()).map(|i| self.local_degree(i)).sum()
    }

    /// `|E(A, B)|` inside the view for disjoint global sets `A, B` of view vertices.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Result<u64> {
        if let Some(v) = a.first_common(b) {
            return Err(Error::OverlappingSets(v));
        }
        let mut in_b = vec![false; self.len()];
        for &v in b.ids() {
            in_b[self.local_of(v).ok_or(Error::VertexOutOfRange { vertex: v, n: self.universe })?] = true;
        }
        let mut total = 0;
        for &v in a.ids() {
            let i = self.local_of(v).ok_or(Error::VertexOutOfRange { vertex: v, n: self.universe })?;
            total += self.local_neighbors(i).iter().filter(|&&j| in_b[j]).count() as u64;
        }
        Ok(total)
    }
}

impl Degrees for LoopedGraph {
    fn universe(&self) -> usize {
        self.universe
    }

    fn degree_of(&self, v: usize) -> Option<u64> {
        self.local_of(v).map(|i| self.local_degree(i))
    }
}
