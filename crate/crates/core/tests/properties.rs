use proptest::prelude::*;

use regmatch_core::generators::random_regular;
use regmatch_core::matcher::{
    brute_force_max_matching, euler_split_matching, euler_split_round, hopcroft_karp_with_phases, match_by_sampling,
};
use regmatch_core::witness::extract_hall_violator;
use regmatch_core::{
    find_perfect_matching, hopcroft_karp, read_graph, sample_edges, validate_perfect_matching, write_graph,
    BipartiteMultigraph, SamplingConfig, Side, VertexSet,
};

fn small_graph(max_side: usize, max_edges: usize) -> impl Strategy<Value = BipartiteMultigraph> {
    (1..=max_side, 1..=max_side).prop_flat_map(move |(l, r)| {
        prop::collection::vec((0..l, 0..r), 0..=max_edges)
            .prop_map(move |edges| BipartiteMultigraph::new(l, r, edges).unwrap())
    })
}

/// Maximum matching size by trying every subset of edges; independent of
/// both matchers under test.
fn max_matching_by_edge_subsets(g: &BipartiteMultigraph) -> usize {
    let edges: Vec<_> = g.edges().collect();
    let mut best = 0;
    for mask in 0u32..1 << edges.len() {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        let (mut lu, mut rv) = (0u64, 0u64);
        let ok = (0..edges.len()).filter(|i| mask >> i & 1 == 1).all(|i| {
            let (u, v) = edges[i];
            let fresh = lu >> u & 1 == 0 && rv >> v & 1 == 0;
            lu |= 1 << u;
            rv |= 1 << v;
            fresh
        });
        if ok {
            best = k;
        }
    }
    best
}

proptest! {
    #[test]
    fn hk_agrees_with_brute_force(g in small_graph(6, 20)) {
        let (m, phases) = hopcroft_karp_with_phases(&g);
        prop_assert!(m.is_subgraph_of(&g));
        prop_assert_eq!(m.size(), brute_force_max_matching(&g).unwrap().size());
        let n = g.n_left().max(g.n_right()) as f64;
        prop_assert!(phases as f64 <= 2.0 * n.sqrt() + 2.0);
    }

    #[test]
    fn matchers_agree_with_edge_subset_oracle(g in small_graph(4, 12)) {
        let want = max_matching_by_edge_subsets(&g);
        prop_assert_eq!(hopcroft_karp(&g).size(), want);
        prop_assert_eq!(brute_force_max_matching(&g).unwrap().size(), want);
    }

    #[test]
    fn cut_is_symmetric(g in small_graph(6, 24), mask in any::<u64>()) {
        let s = VertexSet::from_mask(g.n_left(), g.n_right(), mask & ((1 << g.vertex_count()) - 1));
        prop_assert_eq!(g.cut_size(&s), g.cut_size(&s.complement()));
        prop_assert_eq!(g.cut_edges(&s).len(), g.cut_size(&s));
    }

    #[test]
    fn degree_sum_is_twice_edge_count(g in small_graph(8, 40)) {
        let sum: usize = (0..g.n_left()).map(|u| g.degree(Side::Left, u)).sum::<usize>()
            + (0..g.n_right()).map(|v| g.degree(Side::Right, v)).sum::<usize>();
        prop_assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn text_format_round_trips(g in small_graph(8, 30)) {
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = read_graph(buf.as_slice()).unwrap();
        prop_assert!(back.edges().eq(g.edges()));
        prop_assert_eq!((back.n_left(), back.n_right()), (g.n_left(), g.n_right()));
    }

    #[test]
    fn sampling_is_deterministic_and_a_subgraph(g in small_graph(8, 40), p in 0.0..=1.0f64, seed in any::<u64>()) {
        let cfg = SamplingConfig::new(p, seed).unwrap();
        let a = sample_edges(&g, &cfg);
        let b = sample_edges(&g, &cfg);
        prop_assert!(a.graph.edges().eq(b.graph.edges()));
        prop_assert!(a.origin.windows(2).all(|w| w[0] < w[1]));
        for (i, &e) in a.origin.iter().enumerate() {
            prop_assert_eq!(a.graph.edge(i), g.edge(e));
        }
    }

    #[test]
    fn violator_deficiency_matches_defect(g in small_graph(6, 14)) {
        let m = hopcroft_karp(&g);
        match extract_hall_violator(&g, &m).unwrap() {
            None => prop_assert_eq!(m.size(), g.n_left()),
            Some(h) => {
                prop_assert!(h.neighbors.len() < h.a.len());
                prop_assert_eq!(h.deficiency(), g.n_left() - m.size());
                for u in h.a.indices(Side::Left) {
                    for &v in g.neighbors(Side::Left, u) {
                        prop_assert!(h.neighbors.contains(Side::Right, v as usize));
                    }
                }
            }
        }
    }

    #[test]
    fn driver_returns_edges_of_the_input(n in 2usize..40, d in 1usize..12, seed in any::<u64>()) {
        let d = d.min(n);
        let g = random_regular(n, d, seed).unwrap();
        let r = find_perfect_matching(&g, 48.0, seed).unwrap();
        prop_assert!(r.is_perfect);
        prop_assert!(validate_perfect_matching(&g, &r.matching).unwrap());
        // a small constant forces the sampling path
        let r = match_by_sampling(&g, 0.05, seed).unwrap();
        prop_assert!(r.is_perfect && r.matching.is_subgraph_of(&g));
    }
}

#[test]
fn sample_at_one_is_the_graph() {
    let g = random_regular(30, 7, 3).unwrap();
    let s = sample_edges(&g, &SamplingConfig::new(1.0, 99).unwrap());
    assert!(s.graph.edges().eq(g.edges()));
    assert_eq!(s.kept(), g.edge_count());
    assert_eq!(sample_edges(&g, &SamplingConfig::new(0.0, 99).unwrap()).kept(), 0);
}

#[test]
fn euler_levels_halve_the_degree() {
    for (n, d) in [(16, 8), (64, 16), (100, 32), (9, 4)] {
        for seed in 0..4 {
            let mut g = random_regular(n, d, seed).unwrap();
            let mut deg = d;
            while deg > 1 {
                let (next, _) = g.edge_subgraph(euler_split_round(&g));
                deg /= 2;
                assert_eq!(next.regular_degree(), Some(deg), "n={n} d={d} seed={seed}");
                g = next;
            }
            let g0 = random_regular(n, d, seed).unwrap();
            assert!(validate_perfect_matching(&g0, &euler_split_matching(&g0).unwrap()).unwrap());
        }
    }
}

#[test]
fn hk_phase_bound_on_larger_graphs() {
    for (n, d) in [(200, 3), (500, 10), (1000, 2)] {
        for seed in 0..3 {
            let g = random_regular(n, d, seed).unwrap();
            let s = sample_edges(&g, &SamplingConfig::new(0.6, seed).unwrap());
            let (_, phases) = hopcroft_karp_with_phases(&s.graph);
            assert!(phases as f64 <= 2.0 * (n as f64).sqrt() + 2.0, "{phases} phases at n={n}");
        }
    }
}
