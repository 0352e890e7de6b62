//! Clusters, left-right crossing events and critical-threshold estimation.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::for_each_pair_within;
use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{Region, StripeGeometry, Window};
use crate::graph::{build_boolean_graph, build_threshold_graph, energy_term, WeightedGraph};
use crate::law::{EnergyLaw, SignMode};
use crate::point_process::{sample_marked_ppp, MarkedConfiguration};
use crate::rng::RngSeed;
use crate::stats::{binomial_stderr, median_interval};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Component labels; each label is the smallest vertex index in its component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterLabels {
    labels: Vec<usize>,
}

impl ClusterLabels {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn count(&self) -> usize {
        self.labels.iter().enumerate().filter(|&(v, &l)| v == l).count()
    }

    /// Component sizes, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.labels.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        let mut sizes: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn members(&self, label: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == label).collect()
    }
}

pub fn clusters(graph: &WeightedGraph) -> ClusterLabels {
    let n = graph.vertex_count();
    let mut uf = UnionFind::new(n);
    for e in graph.edges() {
        uf.union(e.i, e.j);
    }
    let mut smallest = vec![usize::MAX; n];
    let roots: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
    for v in 0..n {
        smallest[roots[v]] = smallest[roots[v]].min(v);
    }
    ClusterLabels { labels: roots.iter().map(|&r| smallest[r]).collect() }
}

/// Whether a pair of regions may appear as consecutive vertices of a
/// left-right crossing (both in the stripe, at least one in the box).
#[inline]
pub(crate) fn crossing_pair(a: Region, b: Region) -> bool {
    a.in_stripe() && b.in_stripe() && (a == Region::Box || b == Region::Box)
}

/// True iff some path `x₁ … x_n`, `n ≥ 3`, has `x₁ ∈ S⁻`, `x_n ∈ S⁺` and all
/// interior vertices in `Λ`.
pub fn has_lr_crossing(graph: &WeightedGraph, geometry: &StripeGeometry) -> bool {
    let n = graph.vertex_count();
    let regions: Vec<Region> = (0..n).map(|v| geometry.classify(graph.position(v))).collect();
    let mut uf = UnionFind::new(n + 2);
    for (v, r) in regions.iter().enumerate() {
        match r {
            Region::Left => {
                uf.union(v, n);
            }
            Region::Right => {
                uf.union(v, n + 1);
            }
            _ => {}
        }
    }
    for e in graph.edges() {
        if crossing_pair(regions[e.i], regions[e.j]) {
            uf.union(e.i, e.j);
        }
    }
    uf.connected(n, n + 1)
}

/// `PPP[ρ, ν]` in dimension `dim`, viewed through `G[ζ,β]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdModel {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub zeta: f64,
    pub beta: f64,
}

impl ThresholdModel {
    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        ensure_positive("zeta", self.zeta)?;
        ensure_positive("beta", self.beta)?;
        self.law.validate()
    }

    /// The equivalent `G[1,1]` model: `PPP[ρ ν(ζ/β) ζ^d, ν_{⋆,ζ/β}]`, whose
    /// crossing events at side `ℓ/ζ` have the same law as ours at side `ℓ`.
    pub fn rescaled(&self) -> Result<ThresholdModel> {
        self.validate()?;
        let gamma = self.zeta / self.beta;
        Ok(ThresholdModel {
            dim: self.dim,
            rho: self.rho * self.law.mass(gamma) * self.zeta.powi(self.dim as i32),
            law: self.law.star(gamma)?,
            zeta: 1.0,
            beta: 1.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: usize,
    pub replicas: usize,
}

/// Samples one replica of `model` in the stripe of side `ell` padded by `ζ`.
pub fn sample_for_crossing(model: &ThresholdModel, ell: f64, seed: RngSeed) -> Result<MarkedConfiguration> {
    let geometry = StripeGeometry::new(model.dim, ell)?;
    sample_marked_ppp(model.rho, &model.law, &geometry.padded_window(model.zeta), seed)
}

/// Monte-Carlo frequency of a left-right crossing of `Λ_ℓ` by `G[ζ,β]`.
pub fn crossing_probability(model: &ThresholdModel, ell: f64, replicas: usize, seed: RngSeed) -> Result<CrossingEstimate> {
    model.validate()?;
    if replicas == 0 {
        return Err(Error::Parameter("need at least one replica".into()));
    }
    let geometry = StripeGeometry::new(model.dim, ell)?;
    let outcomes = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let conf = sample_for_crossing(model, ell, seed.child(r))?;
            let graph = build_threshold_graph(&conf, model.zeta, model.beta)?;
            Ok(has_lr_crossing(&graph, &geometry))
        })
        .collect::<Result<Vec<bool>>>()?;
    let hits = outcomes.iter().filter(|&&b| b).count();
    Ok(CrossingEstimate {
        estimate: hits as f64 / replicas as f64,
        stderr: binomial_stderr(hits, replicas),
        hits,
        replicas,
    })
}

/// Bisection settings shared by all threshold estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub dim: usize,
    /// Box side `L`.
    pub ell: f64,
    pub replicas: usize,
    /// Stop once the bracket is at most this wide.
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
    /// How many times the bracket may be doubled/halved to straddle 1/2.
    pub max_expansions: usize,
}

impl ThresholdSearch {
    pub fn new(dim: usize, ell: f64, replicas: usize, tol: f64, lo: f64, hi: f64) -> Self {
        Self { dim, ell, replicas, tol, lo, hi, max_expansions: 6 }
    }

    fn validate(&self) -> Result<()> {
        ensure_positive("box side", self.ell)?;
        ensure_positive("tol", self.tol)?;
        if self.replicas == 0 || self.dim == 0 {
            return Err(Error::Parameter("need replicas ≥ 1 and d ≥ 1".into()));
        }
        if !(self.lo >= 0.0 && self.hi > self.lo) {
            return Err(Error::Parameter(format!("bad bracket [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub value: f64,
    pub freq: f64,
    pub n: usize,
}

/// Result of a bisection for crossing frequency 1/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub parameter: String,
    pub value: f64,
    /// Larger of the final bracket half-width and the 95% order-statistic
    /// interval of the per-replica critical values around `value`.
    pub half_width: f64,
    pub bracket: (f64, f64),
    pub sampling_interval: Option<(f64, f64)>,
    pub replicas_per_probe: usize,
    pub box_side: f64,
    pub seed: RngSeed,
    pub probe_history: Vec<ProbeRecord>,
}

/// Stripe points with their regions, optionally restricted by `|E| ≤ cut`.
struct StripeSample {
    dim: usize,
    coords: Vec<f64>,
    marks: Vec<f64>,
    regions: Vec<Region>,
}

impl StripeSample {
    fn new(conf: &MarkedConfiguration, geometry: &StripeGeometry, mark_cut: f64) -> Self {
        let dim = conf.dim();
        let mut s = StripeSample { dim, coords: Vec::new(), marks: Vec::new(), regions: Vec::new() };
        for i in 0..conf.len() {
            let region = geometry.classify(conf.position(i));
            if region.in_stripe() && conf.mark(i).abs() <= mark_cut {
                s.coords.extend_from_slice(conf.position(i));
                s.marks.push(conf.mark(i));
                s.regions.push(region);
            }
        }
        s
    }

    fn len(&self) -> usize {
        self.marks.len()
    }

    /// Crossing-eligible pairs with `cost ≤ max_cost` (cost from `rule`).
    fn edges<F: Fn(f64, f64, f64) -> f64>(&self, range: f64, max_cost: f64, rule: F) -> Vec<(f64, u32, u32)> {
        let mut out = Vec::new();
        for_each_pair_within(&self.coords, self.dim, range, |i, j, r| {
            if r > 0.0 && crossing_pair(self.regions[i], self.regions[j]) {
                let cost = rule(r, self.marks[i], self.marks[j]);
                if cost <= max_cost {
                    out.push((cost, i as u32, j as u32));
                }
            }
        });
        out
    }

    fn terminal_forest(&self) -> UnionFind {
        let n = self.len();
        let mut uf = UnionFind::new(n + 2);
        for (v, r) in self.regions.iter().enumerate() {
            match r {
                Region::Left => {
                    uf.union(v, n);
                }
                Region::Right => {
                    uf.union(v, n + 1);
                }
                _ => {}
            }
        }
        uf
    }

    /// Smallest edge cost at which a crossing appears (∞ if none).
    fn critical_cost(&self, mut edges: Vec<(f64, u32, u32)>) -> f64 {
        let n = self.len();
        let mut uf = self.terminal_forest();
        edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        for (cost, i, j) in edges {
            uf.union(i as usize, j as usize);
            if uf.connected(n, n + 1) {
                return cost;
            }
        }
        f64::INFINITY
    }

    /// Smallest tag `t` such that the points with tag `≤ t` cross (∞ if none).
    fn critical_tag(&self, tags: &[f64], edges: &[(f64, u32, u32)]) -> f64 {
        let n = self.len();
        let mut start = vec![0usize; n + 1];
        for &(_, i, j) in edges {
            start[i as usize + 1] += 1;
            start[j as usize + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut adj = vec![0u32; start[n]];
        for &(_, i, j) in edges {
            adj[fill[i as usize]] = j;
            fill[i as usize] += 1;
            adj[fill[j as usize]] = i;
            fill[j as usize] += 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| tags[a].total_cmp(&tags[b]));
        let mut present = vec![false; n];
        let mut uf = UnionFind::new(n + 2);
        for v in order {
            present[v] = true;
            match self.regions[v] {
                Region::Left => {
                    uf.union(v, n);
                }
                Region::Right => {
                    uf.union(v, n + 1);
                }
                _ => {}
            }
            for &u in &adj[start[v]..start[v + 1]] {
                if present[u as usize] {
                    uf.union(v, u as usize);
                }
            }
            if uf.connected(n, n + 1) {
                return tags[v];
            }
        }
        f64::INFINITY
    }
}

/// Child stream holding the thinning tags of a replica.
const TAG_STREAM: u64 = u64::MAX;

fn frequency(sorted: &[f64], value: f64) -> f64 {
    sorted.partition_point(|&c| c <= value) as f64 / sorted.len() as f64
}

/// Bisection on sorted per-replica critical values. Frequency exactly 1/2
/// moves the lower end up.
fn bisect(
    parameter: &str,
    sorted: &[f64],
    mut lo: f64,
    mut hi: f64,
    search: &ThresholdSearch,
    seed: RngSeed,
) -> ThresholdEstimate {
    let n = sorted.len();
    let mut history = vec![
        ProbeRecord { value: lo, freq: frequency(sorted, lo), n },
        ProbeRecord { value: hi, freq: frequency(sorted, hi), n },
    ];
    while hi - lo > search.tol {
        let mid = 0.5 * (lo + hi);
        let f = frequency(sorted, mid);
        history.push(ProbeRecord { value: mid, freq: f, n });
        if f <= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    let sampling_interval = median_interval(sorted, 0.95);
    let mut half_width = 0.5 * (hi - lo);
    if let Some((a, b)) = sampling_interval {
        half_width = half_width.max(value - a).max(b - value);
    }
    ThresholdEstimate {
        parameter: parameter.to_string(),
        value,
        half_width,
        bracket: (lo, hi),
        sampling_interval,
        replicas_per_probe: n,
        box_side: search.ell,
        seed,
        probe_history: history,
    }
}

fn sorted_values(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_unstable_by(|a, b| a.total_cmp(b));
    v
}

/// Per-replica critical `ζ` values for `G[ζ,β]` under `PPP[ρ, ν]`, all probes
/// up to `zeta_max` sharing one coupled sample per replica.
pub fn critical_zetas(
    dim: usize,
    beta: f64,
    rho: f64,
    law: &EnergyLaw,
    ell: f64,
    zeta_max: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    ensure_positive("beta", beta)?;
    ensure_positive("zeta", zeta_max)?;
    let geometry = StripeGeometry::new(dim, ell)?;
    let window = geometry.padded_window(zeta_max);
    // β(|E_x|+|E_y|+|E_x−E_y|) ≥ 2β|E_x|, so larger marks are isolated
    let cut = zeta_max / (2.0 * beta) * (1.0 + 1e-12);
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let conf = sample_marked_ppp(rho, law, &window, seed.child(r))?;
            let sample = StripeSample::new(&conf, &geometry, cut);
            let edges = sample.edges(zeta_max, zeta_max, |d, a, b| d + beta * energy_term(a, b));
            Ok(sample.critical_cost(edges))
        })
        .collect()
}

/// Bisection estimate of `ζ_c(β, ρ, ν)` at crossing frequency 1/2.
pub fn estimate_zeta_c(
    search: &ThresholdSearch,
    beta: f64,
    rho: f64,
    law: &EnergyLaw,
    seed: RngSeed,
) -> Result<ThresholdEstimate> {
    search.validate()?;
    ensure_positive("rho", rho)?;
    let (mut lo, mut hi) = (search.lo.max(f64::MIN_POSITIVE), search.hi);
    let mut expansions = 0;
    loop {
        let crit = sorted_values(critical_zetas(search.dim, beta, rho, law, search.ell, hi, search.replicas, seed)?);
        if frequency(&crit, hi) <= 0.5 {
            if expansions == search.max_expansions {
                return Err(Error::Search(format!("crossing frequency stays ≤ 1/2 up to zeta = {hi}")));
            }
            expansions += 1;
            lo = hi;
            hi *= 2.0;
            continue;
        }
        let mut shrink = 0;
        while frequency(&crit, lo) > 0.5 {
            if shrink == search.max_expansions {
                return Err(Error::Search(format!("crossing frequency exceeds 1/2 down to zeta = {lo}")));
            }
            shrink += 1;
            hi = lo;
            lo *= 0.5;
        }
        return Ok(bisect("zeta", &crit, lo, hi, search, seed));
    }
}

/// Graph families whose critical intensity can be estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntensityGraph {
    /// `G[ζ,β]` with marks from `law`.
    Threshold { law: EnergyLaw, zeta: f64, beta: f64 },
    /// Boolean model of radius `r` (marks ignored).
    Boolean { radius: f64 },
}

impl IntensityGraph {
    fn range(&self) -> f64 {
        match self {
            IntensityGraph::Threshold { zeta, .. } => *zeta,
            IntensityGraph::Boolean { radius } => 2.0 * radius,
        }
    }
}

/// Per-replica critical intensities: each replica samples `PPP[λ_max]`
/// once, tags points with i.i.d. uniforms and reads off the smallest `λ`
/// whose `λ/λ_max`-thinning crosses.
pub fn critical_intensities(
    dim: usize,
    graph: &IntensityGraph,
    ell: f64,
    lambda_max: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    ensure_positive("lambda", lambda_max)?;
    let geometry = StripeGeometry::new(dim, ell)?;
    let range = graph.range();
    ensure_positive("interaction range", range)?;
    let window = geometry.padded_window(range);
    let uniform = EnergyLaw::uniform_signed();
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let child = seed.child(r);
            let (law, cut) = match graph {
                IntensityGraph::Threshold { law, zeta, beta } => (law, zeta / (2.0 * beta) * (1.0 + 1e-12)),
                IntensityGraph::Boolean { .. } => (&uniform, f64::INFINITY),
            };
            let conf = sample_marked_ppp(lambda_max, law, &window, child)?;
            let sample = StripeSample::new(&conf, &geometry, cut);
            let mut tag_rng = child.child(TAG_STREAM).rng();
            let tags: Vec<f64> = (0..sample.len()).map(|_| tag_rng.random::<f64>()).collect();
            let edges = match graph {
                IntensityGraph::Threshold { zeta, beta, .. } => {
                    sample.edges(*zeta, *zeta, |d, a, b| d + beta * energy_term(a, b))
                }
                IntensityGraph::Boolean { radius } => sample.edges(2.0 * radius, 2.0 * radius, |d, _, _| d),
            };
            Ok(sample.critical_tag(&tags, &edges) * lambda_max)
        })
        .collect()
}

/// Bisection estimate of the critical intensity of `graph` at crossing frequency 1/2.
pub fn estimate_intensity_threshold(search: &ThresholdSearch, graph: &IntensityGraph, seed: RngSeed) -> Result<ThresholdEstimate> {
    search.validate()?;
    let (mut lo, mut hi) = (search.lo, search.hi);
    for _ in 0..=search.max_expansions {
        let crit = sorted_values(critical_intensities(search.dim, graph, search.ell, hi, search.replicas, seed)?);
        if frequency(&crit, hi) > 0.5 {
            if frequency(&crit, lo) > 0.5 {
                return Err(Error::Search(format!("crossing frequency exceeds 1/2 at lambda = {lo}")));
            }
            return Ok(bisect("lambda", &crit, lo, hi, search, seed));
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Search(format!("crossing frequency stays ≤ 1/2 up to lambda = {}", hi / 2.0)))
}

/// `λ_c(α)` (signed marks) or `λ_c⁺(α)` (positive marks) for `G[1,1]`
/// under `PPP[λ, ν_{1,α}]` resp. `PPP[λ, ν⁺_{1,α}]`.
pub fn estimate_lambda_c(search: &ThresholdSearch, alpha: f64, sign: SignMode, seed: RngSeed) -> Result<ThresholdEstimate> {
    let law = EnergyLaw::power(sign, 1.0, alpha)?;
    estimate_intensity_threshold(search, &IntensityGraph::Threshold { law, zeta: 1.0, beta: 1.0 }, seed)
}

/// Asymptotic threshold for a power-law model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaPrediction {
    /// `(λ*/ρ)^{1/(α+1+d)} (βC₀)^{(α+1)/(α+1+d)}`.
    pub zeta_c: f64,
    /// `exp(−ζ_c)`.
    pub c_c: f64,
    /// `−(λ* C₀^{α+1}/ρ)^{1/(α+1+d)}`.
    pub chi: f64,
    /// Whether `ζ_c ≤ min{C₀, ε}·β`, the regime where the formula is exact.
    pub valid: bool,
}

pub fn predicted_zeta_c(lambda_star: f64, rho: f64, c0: f64, alpha: f64, dim: usize, beta: f64) -> Result<ZetaPrediction> {
    predicted_zeta_c_with_radius(lambda_star, rho, c0, alpha, dim, beta, c0)
}

/// As [`predicted_zeta_c`] for a law that agrees with the power law only on `[−ε, ε]`.
pub fn predicted_zeta_c_with_radius(
    lambda_star: f64,
    rho: f64,
    c0: f64,
    alpha: f64,
    dim: usize,
    beta: f64,
    epsilon: f64,
) -> Result<ZetaPrediction> {
    ensure_positive("epsilon", epsilon)?;
    let zeta_c = crate::point_process::mott_length(lambda_star, rho, c0, alpha, dim, beta)?;
    let k = alpha + 1.0 + dim as f64;
    Ok(ZetaPrediction {
        zeta_c,
        c_c: (-zeta_c).exp(),
        chi: -(lambda_star * c0.powf(alpha + 1.0) / rho).powf(1.0 / k),
        valid: zeta_c <= c0.min(epsilon) * beta,
    })
}

/// Critical Boolean intensity for radius `r`, used to bracket `λ_c` from both sides.
pub fn estimate_boolean_lambda_c(search: &ThresholdSearch, radius: f64, seed: RngSeed) -> Result<ThresholdEstimate> {
    estimate_intensity_threshold(search, &IntensityGraph::Boolean { radius }, seed)
}

/// Sup-norm diameter of the component of `root`.
pub fn component_diameter(graph: &WeightedGraph, root: usize) -> f64 {
    component_extent(graph, root).0
}

/// (diameter, members) of the component containing `root`.
fn component_extent(graph: &WeightedGraph, root: usize) -> (f64, Vec<usize>) {
    let adj = graph.adjacency();
    let mut seen = vec![false; graph.vertex_count()];
    let mut stack = vec![root];
    let mut members = Vec::new();
    seen[root] = true;
    while let Some(v) = stack.pop() {
        members.push(v);
        for (u, _) in adj.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    let dim = graph.dim();
    let mut diam: f64 = 0.0;
    for k in 0..dim {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &members {
            let x = graph.position(v)[k];
            lo = lo.min(x);
            hi = hi.max(x);
        }
        diam = diam.max(hi - lo);
    }
    (diam, members)
}

/// Diameters of the origin's cluster under the Palm law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PalmDiameters {
    pub diameters: Vec<f64>,
    /// Replicas whose cluster came within `ζ` of the window boundary.
    pub truncated: usize,
    pub truncation_rate: f64,
    /// False when the truncation rate reaches 1%.
    pub valid: bool,
}

impl PalmDiameters {
    /// `(n, ln P̂(diam > n))` for each threshold with a nonzero count.
    pub fn log_survival(&self, thresholds: &[f64]) -> Vec<(f64, f64)> {
        let total = self.diameters.len() as f64;
        thresholds
            .iter()
            .filter_map(|&t| {
                let k = self.diameters.iter().filter(|&&d| d > t).count();
                (k > 0).then(|| (t, (k as f64 / total).ln()))
            })
            .collect()
    }
}

/// Samples `PPP[λ, ν]` on `[−R, R]^d`, adds the origin with a fresh mark and
/// measures the sup-norm diameter of its `G[ζ,β]` cluster.
#[allow(clippy::too_many_arguments)]
pub fn palm_cluster_diameter(
    dim: usize,
    lambda: f64,
    law: &EnergyLaw,
    zeta: f64,
    beta: f64,
    window_radius: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<PalmDiameters> {
    ensure_positive("window radius", window_radius)?;
    if replicas == 0 {
        return Err(Error::Parameter("need at least one replica".into()));
    }
    let window = Window::centered_cube(dim, window_radius)?;
    let results = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let child = seed.child(r);
            let conf = sample_marked_ppp(lambda, law, &window, child.child(0))?.palm_augment(law, child.child(1))?;
            let graph = build_threshold_graph(&conf, zeta, beta)?;
            let (diam, members) = component_extent(&graph, conf.len() - 1);
            let touches = members.iter().any(|&v| window.distance_to_boundary(graph.position(v)) <= zeta);
            Ok((diam, touches))
        })
        .collect::<Result<Vec<(f64, bool)>>>()?;
    let truncated = results.iter().filter(|r| r.1).count();
    let truncation_rate = truncated as f64 / replicas as f64;
    Ok(PalmDiameters {
        diameters: results.into_iter().map(|r| r.0).collect(),
        truncated,
        truncation_rate,
        valid: truncation_rate < 0.01,
    })
}

/// Boolean-graph version of [`crossing_probability`], for the sandwich bounds.
pub fn boolean_crossing_probability(
    dim: usize,
    lambda: f64,
    radius: f64,
    ell: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<CrossingEstimate> {
    let geometry = StripeGeometry::new(dim, ell)?;
    let window = geometry.padded_window(2.0 * radius);
    let law = EnergyLaw::uniform_signed();
    let outcomes = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let conf = sample_marked_ppp(lambda, &law, &window, seed.child(r))?;
            Ok(has_lr_crossing(&build_boolean_graph(&conf, radius)?, &geometry))
        })
        .collect::<Result<Vec<bool>>>()?;
    let hits = outcomes.iter().filter(|&&b| b).count();
    Ok(CrossingEstimate {
        estimate: hits as f64 / replicas.max(1) as f64,
        stderr: binomial_stderr(hits, replicas),
        hits,
        replicas,
    })
}
