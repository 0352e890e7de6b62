use std::collections::HashSet;

use rand::Rng;

use hopnet::crossings::{box_vertex_count, crossing_flow};
use hopnet::fkg::fkg_events;
use hopnet::graph::rescaled_edge_sets;
use hopnet::stats::{ks_test, mean_stderr};
use hopnet::*;

/// Independent edge predicate for `G[ζ,β]`.
fn naive_edges(conf: &MarkedConfiguration, zeta: f64, beta: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..conf.len() {
        for j in i + 1..conf.len() {
            let r = conf.position(i).iter().zip(conf.position(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let (a, b) = (conf.mark(i), conf.mark(j));
            if r > 0.0 && r + beta * (a.abs() + b.abs() + (a - b).abs()) <= zeta {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn threshold_graph_matches_naive_predicate() {
    for k in 0..40u64 {
        let window = Window::centered_cube(1 + (k % 3) as usize, 3.0).unwrap();
        let conf = sample_marked_ppp(1.0, &EnergyLaw::uniform_signed(), &window, RngSeed::new(k)).unwrap();
        let (zeta, beta) = (0.5 + 0.1 * k as f64, 0.3 + 0.05 * k as f64);
        assert_eq!(build_threshold_graph(&conf, zeta, beta).unwrap().edge_set(), naive_edges(&conf, zeta, beta));
    }
}

#[test]
fn rescaling_isomorphism_on_many_configurations() {
    let mut rng = RngSeed::new(31).rng();
    for k in 0..100u64 {
        let zeta = rng.random_range(0.5..=4.0);
        let beta = rng.random_range(0.5..=4.0);
        let window = Window::centered_cube(2, 5.0).unwrap();
        let conf = sample_marked_ppp(1.0, &EnergyLaw::uniform_signed(), &window, RngSeed::new(100 + k)).unwrap();
        let (a, b) = rescaled_edge_sets(&conf, zeta, beta).unwrap();
        assert_eq!(a, b, "instance {k}");
    }
}

#[test]
fn poisson_counts_have_matching_mean_and_variance() {
    let window = Window::new(vec![0.0, 0.0], vec![3.0, 2.0]).unwrap();
    let counts: Vec<f64> = (0..4000u64)
        .map(|r| sample_marked_ppp(2.5, &EnergyLaw::uniform_signed(), &window, RngSeed::new(9).child(r)).unwrap().len() as f64)
        .collect();
    let (mean, se) = mean_stderr(&counts);
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!((mean - 15.0).abs() < 4.0 * se, "mean {mean} ± {se}");
    // variance of the sample variance for Poisson(μ) is about (μ + 2μ²)/n
    let var_se = ((15.0 + 2.0 * 225.0) / counts.len() as f64).sqrt();
    assert!((var - 15.0).abs() < 4.0 * var_se, "variance {var}");
}

#[test]
fn power_law_marks_follow_their_cdf() {
    for law in [EnergyLaw::positive_power(1.5, 2.0).unwrap(), EnergyLaw::signed_power(0.7, 0.5).unwrap()] {
        let mut rng = RngSeed::new(4).rng();
        let xs: Vec<f64> = (0..20_000).map(|_| law.sample(&mut rng)).collect();
        let t = ks_test(&xs, |e| law.cdf(e)).unwrap();
        assert!(t.p_value > 0.001, "{law:?}: {t:?}");
    }
}

#[test]
fn mott_length_examples() {
    // (λ/ρ)^{1/k} (C₀β)^{(α+1)/k}, k = α+1+d
    let l = mott_length(8.0, 1.0, 1.0, 0.0, 2, 1.0).unwrap();
    assert!((l - 2.0).abs() < 1e-12);
    let l = mott_length(1.0, 1.0, 1.0, 1.0, 2, 16.0).unwrap();
    assert!((l - 16f64.powf(0.5)).abs() < 1e-12);
}

#[test]
fn crossing_bound_hand_values() {
    let b = crossing_lower_bound(2, 4);
    assert!((b.tight - 0.5).abs() < 1e-15);
    assert!((b.weak.unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(crossing_lower_bound(0, 5).tight, 0.0);
}

fn small_graph(rng: &mut impl Rng) -> WeightedGraph {
    let n = rng.random_range(3..=12);
    let p = rng.random_range(0.15..0.6);
    let points: Vec<(Vec<f64>, f64)> = (0..n).map(|_| (vec![rng.random_range(-2.0..2.0), rng.random_range(-0.99..0.99)], 0.0)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    WeightedGraph::from_points(2, &points, &edges).unwrap()
}

#[test]
fn max_flow_agrees_with_brute_force() {
    let geometry = StripeGeometry::new(2, 2.0).unwrap();
    let mut rng = RngSeed::new(17).rng();
    for _ in 0..200 {
        let g = small_graph(&mut rng);
        assert_eq!(max_vertex_disjoint_crossings(&g, &geometry), brute_force_crossings(&g, &geometry).unwrap());
    }
}

#[test]
fn menger_certificates() {
    let geometry = StripeGeometry::new(2, 6.0).unwrap();
    let mut rng = RngSeed::new(23).rng();
    let mut checked = 0;
    for k in 0..40u64 {
        let conf = sample_marked_ppp(2.0, &EnergyLaw::uniform_signed(), &geometry.padded_window(1.0), RngSeed::new(k)).unwrap();
        let g = build_threshold_graph(&conf, 1.6, 0.3).unwrap();
        let flow = crossing_flow(&g, &geometry);
        if flow.count == 0 {
            continue;
        }
        checked += 1;
        let cut: HashSet<usize> = flow.cut.iter().copied().collect();
        let without_cut = g.retain_edges(|e| !cut.contains(&e.i) && !cut.contains(&e.j));
        assert!(!has_lr_crossing(&without_cut, &geometry));
        // any N-1 removed vertices leave a crossing
        let candidates: Vec<usize> = (0..g.vertex_count()).collect();
        for _ in 0..5 {
            let removed: HashSet<usize> =
                rand::seq::index::sample(&mut rng, candidates.len(), flow.count - 1).iter().collect();
            let h = g.retain_edges(|e| !removed.contains(&e.i) && !removed.contains(&e.j));
            assert!(has_lr_crossing(&h, &geometry));
        }
    }
    assert!(checked >= 10);
}

#[test]
fn crossing_bound_holds_on_unit_graphs() {
    let geometry = StripeGeometry::new(2, 6.0).unwrap();
    for k in 0..30u64 {
        let conf = sample_marked_ppp(2.0, &EnergyLaw::uniform_signed(), &geometry.padded_window(1.0), RngSeed::new(50 + k)).unwrap();
        let g = build_threshold_graph(&conf, 1.3, 0.4).unwrap().unit_weights();
        let n = max_vertex_disjoint_crossings(&g, &geometry);
        let s = hopnet::conductivity::sigma(&g, &geometry, 1e-11).unwrap();
        let b = crossing_lower_bound(n, box_vertex_count(&g, &geometry));
        assert!(b.tight <= s * (1.0 + 1e-9), "N = {n}, bound {} > sigma {s}", b.tight);
        assert!(b.weak.unwrap_or(0.0) <= b.tight);
    }
}

/// `|a| + |b| + |a−b|` in closed form: `2 max(|a|,|b|)` for equal signs, `2(|a|+|b|)` otherwise.
fn w_closed(a: f64, b: f64) -> f64 {
    if a * b >= 0.0 {
        2.0 * a.abs().max(b.abs())
    } else {
        2.0 * (a.abs() + b.abs())
    }
}

#[test]
fn fkg_b_probability_by_grid_integration() {
    let n = 2000;
    let h = 2.0 / n as f64;
    let mut inside = 0u64;
    for i in 0..n {
        let a = -1.0 + (i as f64 + 0.5) * h;
        for j in 0..n {
            let b = -1.0 + (j as f64 + 0.5) * h;
            inside += u64::from(w_closed(a, b) > 3.0);
        }
    }
    let p = inside as f64 / (n * n) as f64;
    assert!((p - 1.0 / 16.0).abs() < 2e-3, "{p}");
}

#[test]
fn fkg_events_never_meet_on_fine_grid() {
    let steps = 2000;
    let at = |k: usize| -1.0 + 2.0 * k as f64 / steps as f64;
    let mut b_pairs = 0u64;
    for i in 0..=steps {
        for k in 0..=steps {
            let (e0, e2) = (at(i), at(k));
            if !fkg_events(e0, 0.0, e2).unwrap().b {
                continue;
            }
            b_pairs += 1;
            for j in 0..=steps {
                let ev = fkg_events(e0, at(j), e2).unwrap();
                assert!(!(ev.a && ev.b), "A and B at ({e0}, {}, {e2})", at(j));
            }
        }
    }
    assert!(b_pairs > 0);
}

#[test]
fn fkg_monte_carlo_matches_exact_b() {
    let s = fkg_probabilities(200_000, RngSeed::new(3)).unwrap();
    assert_eq!(s.hits_ab, 0);
    assert!((s.pb - 0.0625).abs() < 4.0 * s.stderr_b);
    assert!(s.pa > 0.0);
}
