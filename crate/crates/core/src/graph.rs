//! Threshold graphs `G[ζ,β]`, Boolean models and Miller–Abrahams networks.

use std::collections::HashSet;

use serde::Serialize;

use crate::cells::{distance, for_each_pair_brute, for_each_pair_within};
use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{Region, StripeGeometry};
use crate::point_process::MarkedConfiguration;

/// `|E_x| + |E_y| + |E_x − E_y|`, i.e. `2 max{|E_x|,|E_y|}` for marks of equal
/// sign and `2 |E_x − E_y|` for marks of opposite sign.
#[inline]
pub fn energy_term(ex: f64, ey: f64) -> f64 {
    ex.abs() + ey.abs() + (ex - ey).abs()
}

/// Miller–Abrahams conductance `exp(−|x−y| − β(|E_x|+|E_y|+|E_x−E_y|))`.
pub fn conductance(x: &[f64], y: &[f64], ex: f64, ey: f64, beta: f64) -> Result<f64> {
    conductance_with_scale(x, y, ex, ey, beta, 1.0)
}

/// Conductance with the distance multiplied by `distance_scale` (a
/// localization-length prefactor; 1 is the standard convention).
pub fn conductance_with_scale(x: &[f64], y: &[f64], ex: f64, ey: f64, beta: f64, distance_scale: f64) -> Result<f64> {
    let r = distance(x, y);
    if r == 0.0 {
        return Err(Error::Domain("conductance between coincident points is undefined".into()));
    }
    Ok((-distance_scale * r - beta * energy_term(ex, ey)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Parameters a graph was built with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphMeta {
    Threshold { zeta: f64, beta: f64 },
    Boolean { radius: f64 },
    MillerAbrahams { beta: f64, ell: f64, c_min: f64 },
    Custom,
}

/// Vertices with positions and marks, plus a weighted simple edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    dim: usize,
    coords: Vec<f64>,
    marks: Vec<f64>,
    origin: Vec<usize>,
    edges: Vec<Edge>,
    meta: GraphMeta,
}

/// Compressed adjacency lists.
#[derive(Debug, Clone)]
pub struct Adjacency {
    start: Vec<usize>,
    target: Vec<usize>,
    weight: Vec<f64>,
}

impl Adjacency {
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.start[v]..self.start[v + 1];
        self.target[r.clone()].iter().copied().zip(self.weight[r].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.start[v + 1] - self.start[v]
    }
}

impl WeightedGraph {
    /// Graph from an explicit edge list. Endpoints are normalized to `i < j`;
    /// self-loops, duplicates and non-positive weights are rejected.
    pub fn new(dim: usize, coords: Vec<f64>, marks: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if dim == 0 || coords.len() != marks.len() * dim {
            return Err(Error::Parameter("coordinates do not match vertex count".into()));
        }
        let n = marks.len();
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == j || j >= n {
                return Err(Error::Parameter(format!("invalid edge ({a}, {b})")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Parameter(format!("edge ({a}, {b}) has weight {w}")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::Parameter(format!("duplicate edge ({i}, {j})")));
            }
            out.push(Edge { i, j, weight: w });
        }
        out.sort_by_key(|e| (e.i, e.j));
        Ok(Self { dim, coords, marks, origin: (0..n).collect(), edges: out, meta: GraphMeta::Custom })
    }

    /// Convenience constructor from `(position, mark)` pairs and unit-weight edges.
    pub fn from_points(dim: usize, points: &[(Vec<f64>, f64)], edges: &[(usize, usize)]) -> Result<Self> {
        let coords = points.iter().flat_map(|(x, _)| x.iter().copied()).collect();
        let marks = points.iter().map(|(_, e)| *e).collect();
        Self::new(dim, coords, marks, edges.iter().map(|&(i, j)| (i, j, 1.0)).collect())
    }

    fn from_parts(conf_dim: usize, coords: Vec<f64>, marks: Vec<f64>, origin: Vec<usize>, mut edges: Vec<Edge>, meta: GraphMeta) -> Self {
        edges.sort_unstable_by_key(|e| (e.i, e.j));
        Self { dim: conf_dim, coords, marks, origin, edges, meta }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.marks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn position(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    pub fn mark(&self, v: usize) -> f64 {
        self.marks[v]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn marks(&self) -> &[f64] {
        &self.marks
    }

    /// Index of vertex `v` in the configuration the graph was built from.
    pub fn origin(&self, v: usize) -> usize {
        self.origin[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn meta(&self) -> GraphMeta {
        self.meta
    }

    /// Sorted `(i, j)` pairs.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn adjacency(&self) -> Adjacency {
        let n = self.vertex_count();
        let mut start = vec![0usize; n + 1];
        for e in &self.edges {
            start[e.i + 1] += 1;
            start[e.j + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut target = vec![0usize; 2 * self.edges.len()];
        let mut weight = vec![0.0; 2 * self.edges.len()];
        for e in &self.edges {
            target[fill[e.i]] = e.j;
            weight[fill[e.i]] = e.weight;
            fill[e.i] += 1;
            target[fill[e.j]] = e.i;
            weight[fill[e.j]] = e.weight;
            fill[e.j] += 1;
        }
        Adjacency { start, target, weight }
    }

    /// Same graph with every weight set to 1.
    pub fn unit_weights(&self) -> WeightedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = 1.0;
        }
        g
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled_weights(&self, factor: f64) -> WeightedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= factor;
        }
        g
    }

    pub fn retain_edges<F: FnMut(&Edge) -> bool>(&self, keep: F) -> WeightedGraph {
        let mut g = self.clone();
        g.edges.retain(keep);
        g
    }

    /// Adds an edge (or raises its weight to `weight` if present with less).
    pub fn with_edge(&self, a: usize, b: usize, weight: f64) -> Result<WeightedGraph> {
        let (i, j) = (a.min(b), a.max(b));
        if i == j || j >= self.vertex_count() || !(weight > 0.0) {
            return Err(Error::Parameter(format!("invalid edge ({a}, {b}, {weight})")));
        }
        let mut g = self.clone();
        match g.edges.binary_search_by_key(&(i, j), |e| (e.i, e.j)) {
            Ok(k) => g.edges[k].weight = g.edges[k].weight.max(weight),
            Err(k) => g.edges.insert(k, Edge { i, j, weight }),
        }
        Ok(g)
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<WeightedGraph> {
        let n = self.vertex_count();
        let mut check = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut check[p], true)) {
            return Err(Error::Parameter("not a permutation".into()));
        }
        let mut coords = vec![0.0; self.coords.len()];
        let mut marks = vec![0.0; n];
        let mut origin = vec![0; n];
        for v in 0..n {
            let p = perm[v];
            coords[p * self.dim..(p + 1) * self.dim].copy_from_slice(self.position(v));
            marks[p] = self.marks[v];
            origin[p] = self.origin[v];
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.i], perm[e.j]);
                Edge { i: a.min(b), j: a.max(b), weight: e.weight }
            })
            .collect();
        Ok(Self::from_parts(self.dim, coords, marks, origin, edges, self.meta))
    }
}

/// `G[ζ,β](ω)`: all points, edges `|x−y| + β(|E_x|+|E_y|+|E_x−E_y|) ≤ ζ`
/// weighted by their conductance (each weight is at least `e^{−ζ}`).
pub fn build_threshold_graph(conf: &MarkedConfiguration, zeta: f64, beta: f64) -> Result<WeightedGraph> {
    threshold_graph_impl(conf, zeta, beta, false)
}

/// Brute-force `O(n²)` construction of `G[ζ,β]`, for cross-checking.
pub fn build_threshold_graph_brute(conf: &MarkedConfiguration, zeta: f64, beta: f64) -> Result<WeightedGraph> {
    threshold_graph_impl(conf, zeta, beta, true)
}

fn threshold_graph_impl(conf: &MarkedConfiguration, zeta: f64, beta: f64, brute: bool) -> Result<WeightedGraph> {
    ensure_positive("zeta", zeta)?;
    ensure_positive("beta", beta)?;
    let dim = conf.dim();
    // Points with |E| > ζ/β are isolated; only the rest enter the search.
    let active = conf.truncated_indices(zeta / beta);
    let mut coords = Vec::with_capacity(active.len() * dim);
    for &i in &active {
        coords.extend_from_slice(conf.position(i));
    }
    let marks = conf.marks();
    let mut edges = Vec::new();
    let visit = |a: usize, b: usize, r: f64| {
        let (i, j) = (active[a], active[b]);
        let cost = r + beta * energy_term(marks[i], marks[j]);
        if cost <= zeta && r > 0.0 {
            edges.push(Edge { i: i.min(j), j: i.max(j), weight: (-cost).exp() });
        }
    };
    if brute {
        for_each_pair_brute(&coords, dim, zeta, visit);
    } else {
        for_each_pair_within(&coords, dim, zeta, visit);
    }
    Ok(WeightedGraph::from_parts(
        dim,
        conf.coords().to_vec(),
        marks.to_vec(),
        (0..conf.len()).collect(),
        edges,
        GraphMeta::Threshold { zeta, beta },
    ))
}

/// Boolean model `G_r`: edges `0 < |x−y| ≤ 2r`, unit weights.
pub fn build_boolean_graph(conf: &MarkedConfiguration, radius: f64) -> Result<WeightedGraph> {
    ensure_positive("radius", radius)?;
    let dim = conf.dim();
    let reach = 2.0 * radius;
    let mut edges = Vec::new();
    for_each_pair_within(conf.coords(), dim, reach, |i, j, r| {
        if r > 0.0 && r <= reach {
            edges.push(Edge { i, j, weight: 1.0 });
        }
    });
    Ok(WeightedGraph::from_parts(
        dim,
        conf.coords().to_vec(),
        conf.marks().to_vec(),
        (0..conf.len()).collect(),
        edges,
        GraphMeta::Boolean { radius },
    ))
}

/// `MA[β,ℓ](ω)` restricted to filaments with conductance at least `c_min`.
///
/// Nodes are the points of the stripe `S_ℓ`; a pair is a filament when at
/// least one endpoint lies in `Λ_ℓ`. With `c_min = 0` every such pair is kept.
pub fn build_ma_network(
    conf: &MarkedConfiguration,
    beta: f64,
    geometry: &StripeGeometry,
    c_min: f64,
) -> Result<WeightedGraph> {
    build_ma_network_scaled(conf, beta, geometry, c_min, 1.0)
}

/// [`build_ma_network`] with a distance prefactor in the conductance.
pub fn build_ma_network_scaled(
    conf: &MarkedConfiguration,
    beta: f64,
    geometry: &StripeGeometry,
    c_min: f64,
    distance_scale: f64,
) -> Result<WeightedGraph> {
    ensure_positive("beta", beta)?;
    ensure_positive("distance scale", distance_scale)?;
    if !(0.0..1.0).contains(&c_min) {
        return Err(Error::Parameter(format!("c_min must lie in [0, 1), got {c_min}")));
    }
    if conf.dim() != geometry.dim {
        return Err(Error::Parameter("configuration and stripe dimensions differ".into()));
    }
    let dim = conf.dim();
    let mut origin = Vec::new();
    let mut regions = Vec::new();
    for i in 0..conf.len() {
        let region = geometry.classify(conf.position(i));
        if region.in_stripe() {
            origin.push(i);
            regions.push(region);
        }
    }
    for (region, name) in [(Region::Left, "S-"), (Region::Box, "Lambda"), (Region::Right, "S+")] {
        if !regions.contains(&region) {
            return Err(Error::EmptyRegion(name));
        }
    }
    let mut coords = Vec::with_capacity(origin.len() * dim);
    let mut marks = Vec::with_capacity(origin.len());
    for &i in &origin {
        coords.extend_from_slice(conf.position(i));
        marks.push(conf.mark(i));
    }
    let mut edges = Vec::new();
    let mut consider = |i: usize, j: usize, r: f64| {
        if regions[i] != Region::Box && regions[j] != Region::Box {
            return;
        }
        let c = (-distance_scale * r - beta * energy_term(marks[i], marks[j])).exp();
        if r > 0.0 && c >= c_min && c > 0.0 {
            edges.push(Edge { i: i.min(j), j: i.max(j), weight: c });
        }
    };
    if c_min > 0.0 {
        let reach = -c_min.ln() / distance_scale;
        for_each_pair_within(&coords, dim, reach, &mut consider);
    } else {
        for_each_pair_brute(&coords, dim, f64::INFINITY, &mut consider);
    }
    Ok(WeightedGraph::from_parts(
        dim,
        coords,
        marks,
        origin,
        edges,
        GraphMeta::MillerAbrahams { beta, ell: geometry.ell, c_min },
    ))
}

/// Edge sets of `G[ζ,β](ω_{ζ/β})` and `G[1,1](ω_{ζ,β})`, both indexed by
/// position in `ω_{ζ/β}`.
pub fn rescaled_edge_sets(
    conf: &MarkedConfiguration,
    zeta: f64,
    beta: f64,
) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    let original = build_threshold_graph(&conf.truncate(zeta / beta), zeta, beta)?;
    let rescaled = build_threshold_graph(&conf.mott_rescale(zeta, beta)?, 1.0, 1.0)?;
    Ok((original.edge_set(), rescaled.edge_set()))
}

/// True iff `x ↦ x/ζ` maps `G[ζ,β](ω_{ζ/β})` onto `G[1,1](ω_{ζ,β})` edge for edge.
pub fn rescale_isomorphism_check(conf: &MarkedConfiguration, zeta: f64, beta: f64) -> Result<bool> {
    let (a, b) = rescaled_edge_sets(conf, zeta, beta)?;
    Ok(a == b)
}

/// Outcome of the Boolean-model sandwich test on one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    /// Edges of `G_{ζ/10}(ω̂_{ζ/5β})` missing from `G[ζ,β](ω)`.
    pub lower_violations: usize,
    /// Edges of `G[ζ,β](ω)` missing from `G_{ζ/2}(ω̂)`.
    pub upper_violations: usize,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

/// Checks `G_{ζ/10}(ω̂_{ζ/5β}) ⊆ G[ζ,β](ω) ⊆ G_{ζ/2}(ω̂)` edge by edge.
pub fn sandwich_check(conf: &MarkedConfiguration, zeta: f64, beta: f64) -> Result<SandwichReport> {
    let graph = build_threshold_graph(conf, zeta, beta)?;
    let middle: HashSet<(usize, usize)> = graph.edge_set().into_iter().collect();
    let kept = conf.truncated_indices(zeta / (5.0 * beta));
    let lower = build_boolean_graph(&conf.select(&kept), zeta / 10.0)?;
    let lower_violations = lower
        .edges()
        .iter()
        .filter(|e| !middle.contains(&(kept[e.i], kept[e.j])))
        .count();
    let upper: HashSet<(usize, usize)> = build_boolean_graph(conf, zeta / 2.0)?.edge_set().into_iter().collect();
    let upper_violations = middle.iter().filter(|e| !upper.contains(e)).count();
    Ok(SandwichReport { lower_violations, upper_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;
    use crate::law::EnergyLaw;
    use crate::point_process::sample_marked_ppp;
    use crate::rng::RngSeed;

    fn conf(points: Vec<(Vec<f64>, f64)>) -> MarkedConfiguration {
        let dim = points[0].0.len();
        MarkedConfiguration::new(Window::centered_cube(dim, 10.0).unwrap(), points).unwrap()
    }

    #[test]
    fn energy_term_branches() {
        assert_eq!(energy_term(0.0, 0.0), 0.0);
        assert!((energy_term(0.1, 0.3) - 0.6).abs() < 1e-15);
        assert!((energy_term(0.5, -0.5) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn conductance_examples() {
        let c = conductance(&[0.0, 0.0], &[1.0, 0.0], 0.0, 0.0, 3.0).unwrap();
        assert!((c - (-1.0f64).exp()).abs() < 1e-15);
        let c = conductance(&[0.0, 0.0], &[0.3, 0.0], 0.1, -0.1, 1.0).unwrap();
        assert!((c - (-0.7f64).exp()).abs() < 1e-15);
        assert!((c - 0.4966).abs() < 1e-4);
        assert!(matches!(conductance(&[1.0], &[1.0], 0.0, 0.0, 1.0), Err(Error::Domain(_))));
        let mut last = 1.0;
        for beta in [0.5, 1.0, 2.0, 8.0, 32.0] {
            let c = conductance(&[0.0], &[0.5], 0.2, 0.1, beta).unwrap();
            assert!(c < last);
            last = c;
        }
    }

    #[test]
    fn threshold_edge_hand_example() {
        let c = conf(vec![(vec![0.0, 0.0], 0.1), (vec![0.3, 0.0], -0.1)]);
        let g = build_threshold_graph(&c, 1.0, 1.0).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1)]);
        assert!((g.edges()[0].weight - (-0.7f64).exp()).abs() < 1e-15);
        let g = build_threshold_graph(&c, 0.69, 1.0).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn high_marks_isolate_everything() {
        let c = conf(vec![(vec![0.0], 0.6), (vec![0.1], 0.7), (vec![0.2], -0.8)]);
        let g = build_threshold_graph(&c, 1.0, 1.0).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn boolean_boundary_is_inclusive() {
        let r = 0.25;
        let c = conf(vec![(vec![0.0], 0.0), (vec![2.0 * r], 0.0), (vec![4.0 * r + 1e-9], 0.0)]);
        let g = build_boolean_graph(&c, r).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1)]);
    }

    #[test]
    fn boolean_collinear_path() {
        let r = 0.25;
        let c = conf((0..6).map(|k| (vec![k as f64 * r], 0.0)).collect());
        let g = build_boolean_graph(&c, r).unwrap();
        let mut expected = Vec::new();
        for k in 0..6usize {
            for m in k + 1..6 {
                if ((m - k) as f64 * r) <= 2.0 * r + 1e-12 {
                    expected.push((k, m));
                }
            }
        }
        assert_eq!(g.edge_set(), expected);
        let g = build_boolean_graph(&c, 0.6 * r).unwrap();
        assert_eq!(g.edge_set(), (0..5).map(|k| (k, k + 1)).collect::<Vec<_>>());
    }

    #[test]
    fn ma_network_three_point_stripe() {
        let geom = StripeGeometry::new(2, 2.0).unwrap();
        let c = conf(vec![(vec![-1.5, 0.0], 0.0), (vec![0.0, 0.0], 0.0), (vec![1.5, 0.0], 0.0), (vec![0.0, 3.0], 0.0)]);
        let g = build_ma_network(&c, 1.0, &geom, 0.0).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_set(), vec![(0, 1), (1, 2)]);
        assert_eq!((g.origin(0), g.origin(2)), (0, 2));
    }

    #[test]
    fn ma_network_reports_empty_region() {
        let geom = StripeGeometry::new(2, 2.0).unwrap();
        let c = conf(vec![(vec![-1.5, 0.0], 0.0), (vec![0.0, 0.0], 0.0)]);
        match build_ma_network(&c, 1.0, &geom, 0.0) {
            Err(Error::EmptyRegion(name)) => assert_eq!(name, "S+"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn raising_c_min_never_adds_edges() {
        let geom = StripeGeometry::new(2, 4.0).unwrap();
        let c = sample_marked_ppp(2.0, &EnergyLaw::uniform_signed(), &geom.padded_window(3.0), RngSeed::new(9)).unwrap();
        let mut prev: Option<HashSet<(usize, usize)>> = None;
        for c_min in [0.0, 1e-6, 1e-3, 0.05, 0.2] {
            let g = build_ma_network(&c, 1.0, &geom, c_min).unwrap();
            let set: HashSet<_> = g.edge_set().into_iter().collect();
            if let Some(p) = &prev {
                assert!(set.is_subset(p));
            }
            prev = Some(set);
        }
    }

    #[test]
    fn cell_list_equals_brute_force_threshold_graph() {
        for (k, &(zeta, beta)) in [(0.5, 1.0), (1.5, 0.7), (3.0, 4.0)].iter().enumerate() {
            let w = Window::centered_cube(2, 6.0).unwrap();
            let c = sample_marked_ppp(3.0, &EnergyLaw::uniform_signed(), &w, RngSeed::new(k as u64)).unwrap();
            assert!(c.len() <= 500);
            assert_eq!(
                build_threshold_graph(&c, zeta, beta).unwrap(),
                build_threshold_graph_brute(&c, zeta, beta).unwrap()
            );
        }
    }

    #[test]
    fn ma_network_matches_threshold_graph_under_stripe_rule() {
        let geom = StripeGeometry::new(2, 6.0).unwrap();
        let (zeta, beta) = (2.0, 2.0);
        let c = sample_marked_ppp(1.5, &EnergyLaw::uniform_signed(), &geom.padded_window(zeta), RngSeed::new(21)).unwrap();
        let ma = build_ma_network(&c, beta, &geom, 0.0).unwrap();
        let from_ma: HashSet<(usize, usize)> = ma
            .edges()
            .iter()
            .filter(|e| {
                ma.mark(e.i).abs() <= zeta / beta
                    && ma.mark(e.j).abs() <= zeta / beta
                    && e.weight >= (-zeta).exp()
            })
            .map(|e| (ma.origin(e.i), ma.origin(e.j)))
            .collect();
        let g = build_threshold_graph(&c, zeta, beta).unwrap();
        let from_g: HashSet<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|e| {
                let (ri, rj) = (geom.classify(g.position(e.i)), geom.classify(g.position(e.j)));
                ri.in_stripe() && rj.in_stripe() && (ri == Region::Box || rj == Region::Box)
            })
            .map(|e| (e.i, e.j))
            .collect();
        assert_eq!(from_ma, from_g);
    }

    #[test]
    fn identity_rescaling_is_isomorphic() {
        let w = Window::centered_cube(2, 3.0).unwrap();
        let c = sample_marked_ppp(4.0, &EnergyLaw::uniform_signed(), &w, RngSeed::new(5)).unwrap();
        assert!(rescale_isomorphism_check(&c, 1.0, 1.0).unwrap());
    }

    #[test]
    fn permutation_preserves_structure() {
        let g = WeightedGraph::from_points(1, &[(vec![0.0], 0.0), (vec![1.0], 0.1), (vec![2.0], 0.2)], &[(0, 1), (1, 2)]).unwrap();
        let p = g.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.edge_set(), vec![(0, 1), (0, 2)]);
        assert_eq!(p.position(2), &[0.0]);
        assert!(g.permuted(&[0, 0, 1]).is_err());
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        let pts = [(vec![0.0], 0.0), (vec![1.0], 0.0)];
        assert!(WeightedGraph::from_points(1, &pts, &[(0, 0)]).is_err());
        assert!(WeightedGraph::from_points(1, &pts, &[(0, 1), (1, 0)]).is_err());
        assert!(WeightedGraph::new(1, vec![0.0, 1.0], vec![0.0, 0.0], vec![(0, 1, 0.0)]).is_err());
    }
}
