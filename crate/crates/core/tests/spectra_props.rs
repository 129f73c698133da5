use proptest::prelude::*;
use specjoin::graph::{make_complete, make_cycle, make_path, make_star, Graph};
use specjoin::spectra::{
    adjacency_matrix, adjacency_spectrum_closed, compare_values, eigenvalues_symmetric,
    oracle_spectrum, ClosedFormKind, GROUP_TOL,
};

/// Random graph without isolated vertices.
fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..12).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_filter_map(
            "isolated vertex",
            move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                let g = Graph::from_edge_list(n, &edges).ok()?;
                (0..n).all(|v| g.degree(v) > 0).then_some(g)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn range_trace_and_zero_multiplicity(g in graph_strategy()) {
        let s = oracle_spectrum(&g).unwrap();
        let n = g.order() as f64;
        prop_assert!(s.min().unwrap() >= -1e-9);
        prop_assert!(s.max().unwrap() <= 2.0 + 1e-9);
        prop_assert!((s.sum() - n).abs() <= 1e-9 * n);
        prop_assert_eq!(s.count_near(0.0, GROUP_TOL), g.components());
    }

    #[test]
    fn two_is_an_eigenvalue_iff_bipartite_component(g in graph_strategy()) {
        let s = oracle_spectrum(&g).unwrap();
        let top_is_two = (s.max().unwrap() - 2.0).abs() <= 1e-8;
        let bipartite = g.bipartite_components().iter().any(|&b| b);
        prop_assert_eq!(top_is_two, bipartite);
    }
}

#[test]
fn bipartite_rule_on_named_graphs() {
    let top = |g: &Graph| oracle_spectrum(g).unwrap().max().unwrap();
    for (a, b) in [(1, 1), (2, 3), (4, 4), (1, 7)] {
        let g = specjoin::families::Family::CompleteBipartite { a, b }
            .spec()
            .unwrap()
            .materialize()
            .unwrap();
        assert!((top(&g) - 2.0).abs() < 1e-8);
    }
    for m in [4, 6, 10] {
        assert!((top(&make_cycle(m).unwrap()) - 2.0).abs() < 1e-8);
    }
    for m in [3, 5, 9] {
        assert!(top(&make_cycle(m).unwrap()) < 2.0 - 1e-3);
    }
    assert!((top(&make_path(5).unwrap()) - 2.0).abs() < 1e-8);
    assert!((top(&make_star(6).unwrap()) - 2.0).abs() < 1e-8);
    assert!(top(&make_complete(5).unwrap()) < 2.0 - 1e-3);
}

#[test]
fn jacobi_matches_closed_forms_up_to_64() {
    let mut worst: f64 = 0.0;
    for m in 1..=64 {
        let mut kinds = vec![ClosedFormKind::Complete(m), ClosedFormKind::Empty(m)];
        if m >= 3 {
            kinds.push(ClosedFormKind::Cycle(m));
        }
        for kind in kinds {
            let j =
                eigenvalues_symmetric(&adjacency_matrix(&kind.graph().unwrap()).unwrap()).unwrap();
            let c = adjacency_spectrum_closed(kind).unwrap().values();
            worst = worst.max(compare_values(&j, &c, 0.0).unwrap().max_deviation);
        }
    }
    assert!(worst < 1e-10, "{worst}");
}
