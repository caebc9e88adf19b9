use std::collections::HashSet;

use proptest::prelude::*;
use sample_mst::ingest::{preprocess, to_records, EdgelistRecord, ZeroPolicy};
use sample_mst::{
    auc, component_count, induced_subgraph, msf, ppv, sample, summarize_values, weight_ordering, Graph64,
    NodeSubset, SampleDesign, SamplingKind,
};

/// Simple graphs on up to 12 nodes with weights drawn from a small set so
/// that ties are common.
fn graph() -> impl Strategy<Value = Graph64> {
    (1usize..12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (Just(pairs), proptest::collection::vec(proptest::option::weighted(0.5, 1u8..6), m), Just(n))
            .prop_map(|(pairs, ws, n)| {
                let edges = pairs.into_iter().zip(ws).filter_map(|((u, v), w)| w.map(|w| (u, v, w as f64 / 4.0)));
                Graph64::new(n, edges).unwrap()
            })
    })
}

fn subset_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn handshake_sums(g in graph()) {
        let w: f64 = g.edges().iter().map(|e| e.weight).sum();
        let s: f64 = g.strengths().iter().sum();
        prop_assert!((s - 2.0 * w).abs() < 1e-9);
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.n_edges());
    }

    #[test]
    fn induced_subgraph_matches_filter((g, members) in graph().prop_flat_map(|g| { let n = g.n_nodes(); (Just(g), subset_of(n)) })) {
        let sub = induced_subgraph(&g, &NodeSubset::from_members(members.clone())).unwrap();
        let keep: HashSet<usize> = members.iter().copied().collect();
        let expected: Vec<usize> = (0..g.n_edges())
            .filter(|&e| keep.contains(&g.edge(e).u) && keep.contains(&g.edge(e).v))
            .collect();
        prop_assert_eq!(&sub.edges, &expected);
        prop_assert_eq!(sub.graph.n_nodes(), members.len());
        for (local, &parent) in sub.edges.iter().enumerate() {
            let (a, b) = (sub.graph.edge(local), g.edge(parent));
            prop_assert_eq!((sub.nodes[a.u], sub.nodes[a.v], a.weight), (b.u, b.v, b.weight));
        }
    }

    #[test]
    fn forest_size_is_nodes_minus_components(g in graph(), seed in any::<u64>()) {
        let f = msf(&g, &weight_ordering(&g, seed));
        prop_assert_eq!(f.len(), g.n_nodes() - component_count(&g));
    }

    #[test]
    fn monotone_reweighting_keeps_the_forest(g in graph(), seed in any::<u64>()) {
        let cubed = Graph64::new(g.n_nodes(), g.edges().iter().map(|e| (e.u, e.v, e.weight.powi(3) + 1.0))).unwrap();
        prop_assert_eq!(msf(&g, &weight_ordering(&g, seed)), msf(&cubed, &weight_ordering(&cubed, seed)));
    }

    #[test]
    fn ppv_is_a_proportion((g, members) in graph().prop_flat_map(|g| { let n = g.n_nodes(); (Just(g), subset_of(n)) }), seed in any::<u64>()) {
        let ord = weight_ordering(&g, seed);
        let t_pop = msf(&g, &ord);
        let sub = induced_subgraph(&g, &NodeSubset::from_members(members)).unwrap();
        let t_sample = msf(&sub.graph, &ord.restrict(&sub.edges)).lift(&sub.edges);
        match ppv(&t_pop, &t_sample) {
            Some(p) => prop_assert!((0.0..=1.0).contains(&p)),
            None => prop_assert!(t_sample.is_empty()),
        }
    }

    #[test]
    fn samples_are_distinct_and_sized(g in graph(), k in 0usize..12, seed in any::<u64>(), kind in 0usize..4) {
        let kind = [SamplingKind::Uniform, SamplingKind::Near, SamplingKind::Far, SamplingKind::RandomWalk][kind];
        let n = k.min(g.n_nodes());
        let s = sample(&g, &SampleDesign::new(kind, n, seed)).unwrap();
        prop_assert_eq!(s.len(), n);
        let distinct: HashSet<usize> = s.order().iter().copied().collect();
        prop_assert_eq!(distinct.len(), n);
        prop_assert!(s.order().iter().all(|&v| v < g.n_nodes()));
        prop_assert!(sample(&g, &SampleDesign::new(kind, g.n_nodes() + 1, seed)).is_err());
    }

    #[test]
    fn auc_lies_in_unit_interval(pairs in proptest::collection::vec((0u8..5, any::<bool>()), 0..40)) {
        let scores: Vec<u8> = pairs.iter().map(|p| p.0).collect();
        let labels: Vec<bool> = pairs.iter().map(|p| p.1).collect();
        let a = auc(&scores, &labels).unwrap();
        let both = labels.iter().any(|&l| l) && labels.iter().any(|&l| !l);
        prop_assert_eq!(a.is_some(), both);
        if let Some(a) = a {
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }

    #[test]
    fn interval_brackets_the_mean(xs in proptest::collection::vec(proptest::option::of(-1e3f64..1e3), 0..30)) {
        let defined = xs.iter().flatten().count();
        match summarize_values(&xs) {
            Ok(s) => {
                prop_assert_eq!(s.n_defined, defined);
                prop_assert!(s.ci_low <= s.mean && s.mean <= s.ci_high);
            }
            Err(_) => prop_assert!(defined < 2),
        }
    }

    #[test]
    fn preprocessing_is_idempotent(ds in proptest::collection::vec(0u8..30, 1..20), threshold in 0.005f64..0.03) {
        let records: Vec<EdgelistRecord> = ds
            .iter()
            .enumerate()
            .map(|(i, &d)| EdgelistRecord::new(format!("n{}", i / 2), format!("m{}", i % 3), d as f64 / 1000.0))
            .collect();
        let Ok(first) = preprocess(&records, threshold, ZeroPolicy::AfterFilter) else {
            // Only all-zero retained distances have nothing to impute from.
            prop_assert!(records.iter().filter(|r| r.distance <= threshold).all(|r| r.distance == 0.0));
            return Ok(());
        };
        prop_assert!(first.graph.edges().iter().all(|e| e.weight > 0.0 && e.weight <= threshold));
        prop_assert!(first.graph.degrees().iter().all(|&d| d > 0));
        let again = preprocess(&to_records(&first.graph), threshold, ZeroPolicy::AfterFilter).unwrap();
        prop_assert_eq!(again.graph, first.graph);
    }
}
