use aaqaoa::automorphism::{
    brute_force_automorphisms, edge_classes, edge_equivalence_classes,
    find_automorphism_generators, GeneratorSet,
};
use aaqaoa::bits::Bitstring;
use aaqaoa::graph::{parse_edge_list, serialize_edge_list, Graph};
use aaqaoa::hamiltonian::{
    cut_value, full_hamiltonian, reduced_hamiltonian, Convention, IsingHamiltonian,
};
use aaqaoa::optimizer::{minimize_multistart, Multistart, OptimizerConfig};
use aaqaoa::rcc::combined_coverage;
use aaqaoa::simulator::{
    build_qaoa_state, verify_orbit_symmetry, AnsatzParams, ExpectationMode, LightconeEvaluator,
};
use proptest::prelude::*;

/// Random labelled tree from a parent sequence: vertex `i` hangs below one
/// of `0..i`, then labels are shuffled.
fn tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (parents, Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
        .prop_map(|(parents, labels)| {
            let n = labels.len();
            Graph::new(
                n,
                parents
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (labels[i + 1], labels[p])),
            )
            .unwrap()
        })
}

fn angles(p: usize) -> impl Strategy<Value = AnsatzParams> {
    (
        prop::collection::vec(-3.2f64..3.2, p),
        prop::collection::vec(-3.2f64..3.2, p),
    )
        .prop_map(|(b, g)| AnsatzParams::new(b, g).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn edge_list_round_trip(g in tree(20)) {
        let text = serialize_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn energy_is_cut_value(g in tree(9), x in any::<u16>()) {
        let x = Bitstring::from_index(g.n(), x as usize & ((1 << g.n()) - 1));
        let h = full_hamiltonian(&g, Convention::MaxCut);
        prop_assert_eq!(h.energy(&x).unwrap(), cut_value(&g, &x).unwrap() as f64);
        prop_assert_eq!(h.energy(&x.complement()).unwrap(), h.energy(&x).unwrap());
    }

    #[test]
    fn adjacency_terms_count_vertices_and_edges(g in tree(16)) {
        let classes = edge_classes(&g).unwrap();
        let full = full_hamiltonian(&g, Convention::Adjacency);
        prop_assert_eq!(full.term_count().total, g.n() + g.m());
        let red = reduced_hamiltonian(&g, &classes, Convention::Adjacency).unwrap();
        let mut endpoints: Vec<usize> =
            classes.representatives().iter().flat_map(|&(u, v)| [u, v]).collect();
        endpoints.sort_unstable();
        endpoints.dedup();
        prop_assert_eq!(red.term_count().total, classes.len() + endpoints.len());
    }

    #[test]
    fn classes_match_brute_force(g in tree(8)) {
        let group = GeneratorSet::new(g.n(), brute_force_automorphisms(&g).unwrap()).unwrap();
        prop_assert_eq!(edge_classes(&g).unwrap(), edge_equivalence_classes(&g, &group).unwrap());
    }

    #[test]
    fn every_class_member_has_a_witness(g in tree(14)) {
        let gens = find_automorphism_generators(&g).unwrap();
        gens.validate_for(&g).unwrap();
        let classes = edge_equivalence_classes(&g, &gens).unwrap();
        prop_assert_eq!(classes.sizes().iter().sum::<usize>(), g.m());
        for class in classes.classes() {
            for &e in &class.edges {
                let w = gens.edge_transporter(class.representative, e).unwrap();
                prop_assert!(w.is_automorphism_of(&g));
                prop_assert_eq!(w.apply_edge(class.representative), e);
            }
        }
    }

    #[test]
    fn state_is_normalized_and_symmetric(g in tree(11), params in angles(2)) {
        let h = full_hamiltonian(&g, Convention::MaxCut);
        let s = build_qaoa_state(&h, &params).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        let classes = edge_classes(&g).unwrap();
        prop_assert!(verify_orbit_symmetry(&s, &classes).unwrap() <= 1e-9);
        let probs = s.probabilities();
        let all = (1usize << g.n()) - 1;
        for (x, &p) in probs.iter().enumerate() {
            prop_assert!((p - probs[x ^ all]).abs() < 1e-12);
        }
    }

    #[test]
    fn permuted_state_is_unchanged(g in tree(10), params in angles(1)) {
        let h = full_hamiltonian(&g, Convention::MaxCut);
        let s = build_qaoa_state(&h, &params).unwrap();
        for gen in find_automorphism_generators(&g).unwrap().generators() {
            prop_assert!(s.permute(gen).unwrap().max_amplitude_deviation(&s).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn measurement_modes_agree(g in tree(12), params in angles(1), adjacency in any::<bool>()) {
        let conv = if adjacency { Convention::Adjacency } else { Convention::MaxCut };
        let full = full_hamiltonian(&g, conv);
        let red = reduced_hamiltonian(&g, &edge_classes(&g).unwrap(), conv).unwrap();
        let s = build_qaoa_state(&full, &params).unwrap();
        let per_term = s.expectation(&full, ExpectationMode::PerTerm).unwrap();
        let fused = s.expectation(&full, ExpectationMode::Fused).unwrap();
        prop_assert!(close(per_term, fused, 1e-10));
        let reduced = s.expectation(&red, ExpectationMode::PerTerm).unwrap();
        prop_assert!(close(per_term, reduced, 1e-9));
        for h in [&full, &red] {
            let cone = LightconeEvaluator::new(&full, h, 1).unwrap().expectation(&params).unwrap();
            let dense = s.expectation(h, ExpectationMode::Fused).unwrap();
            prop_assert!(close(cone, dense, 1e-9));
        }
    }

    #[test]
    fn hamiltonian_json_round_trip(g in tree(10), adjacency in any::<bool>()) {
        let conv = if adjacency { Convention::Adjacency } else { Convention::MaxCut };
        let h = reduced_hamiltonian(&g, &edge_classes(&g).unwrap(), conv).unwrap();
        prop_assert_eq!(IsingHamiltonian::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn coverage_grows_with_depth(g in tree(18)) {
        let reps = edge_classes(&g).unwrap().representatives();
        let mut previous: Vec<usize> = Vec::new();
        for p in 1..=g.diameter().unwrap().max(1) {
            let r = combined_coverage(&g, &reps, p).unwrap();
            prop_assert!(previous.iter().all(|v| r.covered.contains(v)));
            for ball in r.per_edge.values() {
                prop_assert!(ball.len() >= 2);
            }
            previous = r.covered;
        }
        prop_assert_eq!(previous.len(), g.n());
    }

    #[test]
    fn sampling_is_deterministic(g in tree(10), params in angles(1), seed in any::<u64>()) {
        let h = full_hamiltonian(&g, Convention::MaxCut);
        let s = build_qaoa_state(&h, &params).unwrap();
        prop_assert_eq!(s.sample_indices(64, seed).unwrap(), s.sample_indices(64, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn optimizer_is_deterministic(a in -2.0f64..2.0, b in -2.0f64..2.0, seed in any::<u64>()) {
        let f = |x: &[f64]| (x[0] - a).powi(2) + (x[1] - b).powi(2) + (3.0 * x[0]).sin();
        let cfg = OptimizerConfig {
            multistart: Multistart::Random { count: 4, low: -3.0, high: 3.0 },
            seed,
            ..OptimizerConfig::default()
        };
        let first = minimize_multistart(f, 2, &cfg).unwrap();
        let second = minimize_multistart(f, 2, &cfg).unwrap();
        prop_assert_eq!(&first.best_params, &second.best_params);
        prop_assert_eq!(&first.trace, &second.trace);
        prop_assert_eq!(first.trace.last().unwrap().value, first.best_value);
    }
}
