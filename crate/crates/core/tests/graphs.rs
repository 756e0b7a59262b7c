use instsel::datamodel::{FeatureTable, InstanceKey};
use instsel::similarity::{build_graph, cosine_similarity, SimilarityGraph};
use proptest::prelude::*;

fn vector(d: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-100.0..100.0f64, d).prop_filter("non-zero", |v| v.iter().any(|x| x.abs() > 1e-3))
}

fn table(rows: Vec<Vec<f64>>) -> FeatureTable {
    let d = rows[0].len();
    let keys = (0..rows.len()).map(|i| InstanceKey::new("G", i as u32 + 1, 1, 3).unwrap()).collect();
    FeatureTable::new(keys, (0..d).map(|j| format!("f{j}")).collect(), rows).unwrap()
}

fn table_strategy() -> impl Strategy<Value = FeatureTable> {
    (2usize..15, 2usize..6).prop_flat_map(|(n, d)| proptest::collection::vec(vector(d), n).prop_map(table))
}

proptest! {
    #[test]
    fn cosine_is_symmetric_bounded_and_scale_free(
        (a, b) in (2usize..8).prop_flat_map(|d| (vector(d), vector(d))),
        c in 0.01..100.0f64,
    ) {
        let ab = cosine_similarity(&a, &b).unwrap();
        prop_assert_eq!(ab, cosine_similarity(&b, &a).unwrap());
        prop_assert!((-1.0..=1.0).contains(&ab));
        let scaled: Vec<f64> = a.iter().map(|x| c * x).collect();
        prop_assert!((cosine_similarity(&scaled, &b).unwrap() - ab).abs() <= 1e-12);
        prop_assert!((cosine_similarity(&a, &a).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn raising_the_threshold_only_removes_edges(t in table_strategy(), lo in -1.0..1.0f64, gap in 0.0..1.0f64) {
        let hi = (lo + gap).min(1.0);
        let g_lo = build_graph(&t, lo).unwrap();
        let g_hi = build_graph(&t, hi).unwrap();
        for &(u, v, s) in g_hi.edges() {
            prop_assert!(s >= hi);
            prop_assert!(g_lo.has_edge(u, v));
        }
        prop_assert!(g_hi.n_edges() <= g_lo.n_edges());
    }

    #[test]
    fn edge_list_round_trip(t in table_strategy(), thr in -1.0..1.0f64) {
        let g = build_graph(&t, thr).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf, Some(&serde_json::json!({"seed": 3}))).unwrap();
        let back = SimilarityGraph::read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.nodes(), g.nodes());
        prop_assert_eq!(back.threshold(), g.threshold());
        let pairs = |g: &SimilarityGraph| g.edges().iter().map(|e| (e.0, e.1)).collect::<Vec<_>>();
        prop_assert_eq!(pairs(&back), pairs(&g));
        for (a, b) in back.edges().iter().zip(g.edges()) {
            prop_assert_eq!(a.2, b.2);
        }
    }
}

#[test]
fn edges_match_brute_force_similarities() {
    let mut rng = instsel::rng::stream(5);
    let rows: Vec<Vec<f64>> = (0..30)
        .map(|_| (0..4).map(|_| instsel::rng::unit(&mut rng) - 0.3).collect())
        .collect();
    let t = table(rows.clone());
    let g = build_graph(&t, 0.8).unwrap();
    let mut expected = 0;
    for u in 0..30 {
        for v in (u + 1)..30 {
            let dot: f64 = rows[u].iter().zip(&rows[v]).map(|(x, y)| x * y).sum();
            let nu: f64 = rows[u].iter().map(|x| x * x).sum::<f64>().sqrt();
            let nv: f64 = rows[v].iter().map(|x| x * x).sum::<f64>().sqrt();
            let s = dot / (nu * nv);
            if (s - 0.8).abs() > 1e-12 {
                assert_eq!(g.has_edge(u, v), s >= 0.8, "pair ({u}, {v}) similarity {s}");
                expected += usize::from(s >= 0.8);
            }
        }
    }
    assert!(expected.abs_diff(g.n_edges()) <= 1);
}

#[test]
fn near_one_threshold_selects_almost_everything() {
    let mut rng = instsel::rng::stream(17);
    let t = table((0..40).map(|_| (0..6).map(|_| instsel::rng::normal(&mut rng)).collect()).collect());
    let g = build_graph(&t, 0.99).unwrap();
    let seeds: Vec<u64> = (0..10).collect();
    for h in [instsel::graph_select::Heuristic::DominatingSet, instsel::graph_select::Heuristic::MaximalIndependentSet] {
        let batch = instsel::graph_select::run_batch(&g, h, &seeds).unwrap();
        assert!(batch.sizes.min >= 38, "{h}: {:?}", batch.sizes);
    }
}

#[test]
fn zero_norm_rows_are_rejected() {
    let t = table(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
    assert!(build_graph(&t, 0.5).is_err());
}
