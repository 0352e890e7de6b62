use proptest::prelude::*;

use hopnet::conductivity::sigma;
use hopnet::crossings::crossing_flow;
use hopnet::graph::build_threshold_graph_brute;
use hopnet::*;

fn config(seed: u64, rho: f64, half: f64) -> MarkedConfiguration {
    let window = Window::centered_cube(2, half).unwrap();
    sample_marked_ppp(rho, &EnergyLaw::uniform_signed(), &window, RngSeed::new(seed)).unwrap()
}

fn stripe_graph(seed: u64, zeta: f64) -> (WeightedGraph, StripeGeometry) {
    let geometry = StripeGeometry::new(2, 5.0).unwrap();
    let conf = sample_marked_ppp(1.5, &EnergyLaw::uniform_signed(), &geometry.padded_window(1.0), RngSeed::new(seed)).unwrap();
    (build_threshold_graph(&conf, zeta, 1.0).unwrap().unit_weights(), geometry)
}

fn law_strategy() -> impl Strategy<Value = EnergyLaw> {
    prop_oneof![
        (0.2f64..3.0, 0.0f64..3.0).prop_map(|(c, a)| EnergyLaw::positive_power(c, a).unwrap()),
        (0.2f64..3.0, 0.0f64..3.0).prop_map(|(c, a)| EnergyLaw::signed_power(c, a).unwrap()),
        Just(EnergyLaw::table(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], None).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_is_idempotent_and_nested(seed in any::<u64>(), g1 in 0.05f64..1.2, g2 in 0.05f64..1.2) {
        let conf = config(seed, 2.0, 3.0);
        let t = conf.truncate(g1);
        prop_assert_eq!(t.truncate(g1), t.clone());
        prop_assert_eq!(t.truncate(g2), conf.truncate(g1.min(g2)));
        prop_assert!(t.marks().iter().all(|e| e.abs() <= g1));
    }

    #[test]
    fn law_mass_and_cdf_are_monotone(law in law_strategy(), a in 0.0f64..4.0, b in 0.0f64..4.0) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(law.mass(lo) <= law.mass(hi) + 1e-12);
        prop_assert!(law.cdf(lo) <= law.cdf(hi) + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&law.mass(hi)));
    }

    #[test]
    fn star_law_lives_on_unit_interval(law in law_strategy(), gamma in 0.05f64..4.0) {
        let star = law.star(gamma).unwrap();
        prop_assert!((star.mass(1.0) - 1.0).abs() < 1e-9);
        let mut rng = RngSeed::new(7).rng();
        for _ in 0..200 {
            prop_assert!(star.sample(&mut rng).abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn threshold_edges_grow_with_zeta_and_shrink_with_beta(
        seed in any::<u64>(), z1 in 0.2f64..3.0, z2 in 0.2f64..3.0, b1 in 0.2f64..3.0, b2 in 0.2f64..3.0,
    ) {
        let conf = config(seed, 1.5, 3.0);
        let (zl, zh) = (z1.min(z2), z1.max(z2));
        let (bl, bh) = (b1.min(b2), b1.max(b2));
        let small = build_threshold_graph(&conf, zl, bh).unwrap().edge_set();
        let by_zeta = build_threshold_graph(&conf, zh, bh).unwrap().edge_set();
        let by_beta = build_threshold_graph(&conf, zl, bl).unwrap().edge_set();
        prop_assert!(small.iter().all(|e| by_zeta.binary_search(e).is_ok()));
        prop_assert!(small.iter().all(|e| by_beta.binary_search(e).is_ok()));
    }

    #[test]
    fn cell_search_matches_brute_force(seed in any::<u64>(), zeta in 0.2f64..3.0, beta in 0.2f64..3.0) {
        let conf = config(seed, 2.0, 4.0);
        prop_assert_eq!(
            build_threshold_graph(&conf, zeta, beta).unwrap().edge_set(),
            build_threshold_graph_brute(&conf, zeta, beta).unwrap().edge_set()
        );
    }

    #[test]
    fn adding_edges_never_destroys_crossings(seed in any::<u64>(), zeta in 0.4f64..1.2, a in any::<usize>(), b in any::<usize>()) {
        let (g, geometry) = stripe_graph(seed, zeta);
        let n = g.vertex_count();
        prop_assume!(n >= 2 && a % n != b % n);
        let bigger = g.with_edge(a % n, b % n, 1.0).unwrap();
        prop_assert!(!has_lr_crossing(&g, &geometry) || has_lr_crossing(&bigger, &geometry));
        prop_assert!(max_vertex_disjoint_crossings(&bigger, &geometry) >= max_vertex_disjoint_crossings(&g, &geometry));
    }

    #[test]
    fn crossing_count_and_sigma_ignore_vertex_order(seed in any::<u64>(), zeta in 0.5f64..1.2, shuffle in any::<u64>()) {
        use rand::seq::SliceRandom;
        let (g, geometry) = stripe_graph(seed, zeta);
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut RngSeed::new(shuffle).rng());
        let p = g.permuted(&perm).unwrap();
        prop_assert_eq!(has_lr_crossing(&g, &geometry), has_lr_crossing(&p, &geometry));
        prop_assert_eq!(max_vertex_disjoint_crossings(&g, &geometry), max_vertex_disjoint_crossings(&p, &geometry));
        let (s, sp) = (sigma(&g, &geometry, 1e-11).unwrap(), sigma(&p, &geometry, 1e-11).unwrap());
        prop_assert!((s - sp).abs() <= 1e-8 * s.abs().max(1.0));
    }

    #[test]
    fn crossing_exists_iff_flow_is_positive(seed in any::<u64>(), zeta in 0.3f64..1.2) {
        let (g, geometry) = stripe_graph(seed, zeta);
        let flow = crossing_flow(&g, &geometry);
        prop_assert_eq!(has_lr_crossing(&g, &geometry), flow.count > 0);
        prop_assert_eq!(flow.cut.len(), flow.count);
    }

    #[test]
    fn sigma_is_nonnegative_and_bounded_by_crossing_estimate(seed in any::<u64>(), zeta in 0.3f64..1.2) {
        let (g, geometry) = stripe_graph(seed, zeta);
        let s = sigma(&g, &geometry, 1e-11).unwrap();
        let n = max_vertex_disjoint_crossings(&g, &geometry);
        let nb = hopnet::crossings::box_vertex_count(&g, &geometry);
        prop_assert!(s >= 0.0);
        prop_assert!(crossing_lower_bound(n, nb).tight <= s * (1.0 + 1e-9));
    }
}
