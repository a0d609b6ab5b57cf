use edgecon::graph::{boundary, components, cut_size, volume, MultiGraph, SimpleGraph, VertexSet};
use edgecon::io::{parse_graph, serialize, Format};
use edgecon::oracle::{bounded_edge_connectivity, exhaustive_min_cut, flow_bounded, stoer_wagner, OracleChoice};
use edgecon::trimshave::{shave, trim, trim_with_picker};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            SimpleGraph::from_edges(n, &edges, true).unwrap().0
        })
    })
}

fn arb_multigraph(max_n: usize) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0u64..4, n * (n - 1) / 2).prop_map(move |mults| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(mults).map(|((u, v), w)| (u, v, w)).collect();
            MultiGraph::from_weighted_edges(n, &edges, (0..n).collect()).unwrap()
        })
    })
}

fn subset_of(n: usize, bits: u32) -> VertexSet {
    VertexSet::new(n, (0..n).filter(|&v| bits >> v & 1 == 1)).unwrap()
}

/// Counts edges across two sets by checking every pair.
fn brute_cut(g: &SimpleGraph, a: &VertexSet, b: &VertexSet) -> u64 {
    let mut count = 0;
    for &u in a.ids() {
        for &v in b.ids() {
            if g.has_edge(u, v) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn k5_split_cut_by_pair_enumeration() {
    let edges: Vec<_> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    let (k5, _) = SimpleGraph::from_edges(5, &edges, true).unwrap();
    let a = VertexSet::new(5, [0, 1]).unwrap();
    let b = VertexSet::new(5, [2, 3, 4]).unwrap();
    let expected = brute_cut(&k5, &a, &b);
    assert_eq!(expected, 6);
    assert_eq!(cut_size(&k5, &a, &b).unwrap(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_is_symmetric_and_matches_pairs(g in arb_graph(10), a_bits in any::<u32>(), b_bits in any::<u32>()) {
        let n = g.n();
        let a = subset_of(n, a_bits);
        let b = subset_of(n, b_bits & !a_bits);
        let ab = cut_size(&g, &a, &b).unwrap();
        prop_assert_eq!(ab, cut_size(&g, &b, &a).unwrap());
        prop_assert_eq!(ab, brute_cut(&g, &a, &b));
    }

    #[test]
    fn cut_equals_volume_minus_inside(g in arb_graph(10), bits in any::<u32>()) {
        let s = subset_of(g.n(), bits);
        let vol = volume(&g, &s).unwrap();
        prop_assert_eq!(cut_size(&g, &s, &s.complement()).unwrap(), vol - 2 * g.edges_inside(&s) as u64);
        prop_assert_eq!(boundary(&g, &s), cut_size(&g, &s, &s.complement()).unwrap());
        prop_assert_eq!(volume(&g, &VertexSet::full(g.n())).unwrap(), 2 * g.m() as u64);
    }

    #[test]
    fn serialization_round_trips(g in arb_graph(12)) {
        let d = parse_graph(serialize(&g, Format::Dimacs).as_bytes(), Format::Dimacs, true).unwrap();
        prop_assert_eq!(&d.graph, &g);
        // Edge lists cannot express isolated vertices.
        if (0..g.n()).all(|v| g.degree(v) > 0) {
            let e = parse_graph(serialize(&g, Format::EdgeList).as_bytes(), Format::EdgeList, true).unwrap();
            prop_assert_eq!(&e.graph, &g);
        }
    }

    #[test]
    fn trim_is_the_maximal_fixed_point(g in arb_graph(12), bits in any::<u32>(), seed in any::<u64>()) {
        let s = subset_of(g.n(), bits);
        let t = trim(&g, &s);
        let mask = t.mask();
        for &v in t.ids() {
            prop_assert!(5 * g.degree_into(v, &mask) >= 2 * g.degree(v));
        }
        prop_assert_eq!(trim(&g, &t), t.clone());
        prop_assert!(t.ids().iter().all(|&v| s.contains(v)));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffled = trim_with_picker(&g, &s, |c| (0..c.len()).collect::<Vec<_>>().choose(&mut rng).copied().unwrap());
        prop_assert_eq!(shuffled, t);
    }

    #[test]
    fn shave_is_a_single_pass_filter(g in arb_graph(12), bits in any::<u32>()) {
        let s = subset_of(g.n(), bits);
        let sh = shave(&g, &s);
        let mask = s.mask();
        for &v in s.ids() {
            let inside = g.degree_into(v, &mask);
            prop_assert_eq!(sh.contains(v), 2 * inside > g.degree(v) + 2);
        }
    }

    #[test]
    fn oracle_backends_agree(h in arb_multigraph(12)) {
        let exact = exhaustive_min_cut(&h).unwrap();
        let sw = stoer_wagner(&h).unwrap();
        let max_mult = (0..h.n()).flat_map(|v| h.neighbors(v).iter().map(|&(_, w)| w)).max().unwrap_or(1);
        let big_k = h.n() as u64 * max_mult + 1;
        let flow = flow_bounded(&h, big_k).unwrap();
        prop_assert_eq!(sw.value, exact.value);
        prop_assert_eq!(flow.value, exact.value);
        for side in [&exact.side, &sw.side] {
            prop_assert_eq!(cut_size(&h, side, &side.complement()).unwrap(), exact.value);
        }
        let side = flow.side.unwrap();
        prop_assert_eq!(cut_size(&h, &side, &side.complement()).unwrap(), exact.value);
    }

    #[test]
    fn cap_law(h in arb_multigraph(10)) {
        let lambda = exhaustive_min_cut(&h).unwrap().value;
        for which in [OracleChoice::FlowBounded, OracleChoice::StoerWagner, OracleChoice::Exhaustive] {
            for k in [1u64, 2, 3, 5, u32::MAX as u64] {
                let r = bounded_edge_connectivity(&h, k, which).unwrap();
                prop_assert_eq!(r.value, lambda.min(k));
                prop_assert_eq!(r.side.is_some(), r.value < k);
                if let Some(side) = r.side {
                    prop_assert_eq!(cut_size(&h, &side, &side.complement()).unwrap(), r.value);
                }
            }
        }
    }

    #[test]
    fn components_cover_and_separate(g in arb_graph(12)) {
        let comps = components(&g);
        let total: usize = comps.iter().map(VertexSet::len).sum();
        prop_assert_eq!(total, g.n());
        for c in &comps {
            prop_assert_eq!(boundary(&g, c), 0);
        }
    }
}
