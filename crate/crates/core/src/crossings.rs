//! Vertex-disjoint left-right crossings and the conductivity bound they give.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Region, StripeGeometry};
use crate::graph::{build_threshold_graph, WeightedGraph};
use crate::percolation::{crossing_pair, sample_for_crossing, UnionFind, ThresholdModel};
use crate::rng::RngSeed;
use crate::stats::mean_stderr;

const INF: u32 = u32::MAX / 2;

/// Dinic max-flow on a unit-ish capacity network.
struct FlowNetwork {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

const NIL: usize = usize::MAX;

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        Self { head: vec![NIL; nodes], next: Vec::new(), to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, c: u32) {
        for (a, b, c) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn levels(&self, s: usize) -> Vec<u32> {
        let mut level = vec![u32::MAX; self.head.len()];
        let mut queue = std::collections::VecDeque::from([s]);
        level[s] = 0;
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
                e = self.next[e];
            }
        }
        level
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0u64;
        loop {
            let level = self.levels(s);
            if level[t] == u32::MAX {
                return flow;
            }
            let mut iter = self.head.clone();
            loop {
                let pushed = self.augment(s, t, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed as u64;
            }
        }
    }

    /// One blocking-flow augmenting path, found iteratively.
    fn augment(&mut self, s: usize, t: usize, level: &[u32], iter: &mut [usize]) -> u32 {
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= f;
                    self.cap[e ^ 1] += f;
                }
                return f;
            }
            let mut advanced = false;
            while iter[u] != NIL {
                let e = iter[u];
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                iter[u] = self.next[e];
            }
            if !advanced {
                if u == s {
                    return 0;
                }
                // dead end: retreat and skip the arc that led here
                let e = path.pop().unwrap();
                u = self.to[e ^ 1];
                iter[u] = self.next[iter[u]];
            }
        }
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        self.levels(s).into_iter().map(|l| l != u32::MAX).collect()
    }
}

/// `N_ℓ` together with a minimum vertex cut separating `S⁻` from `S⁺`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingFlow {
    pub count: usize,
    /// `count` vertices meeting every left-right crossing.
    pub cut: Vec<usize>,
}

/// Maximal number of vertex-disjoint left-right crossings (`N_ℓ`).
pub fn max_vertex_disjoint_crossings(graph: &WeightedGraph, geometry: &StripeGeometry) -> usize {
    crossing_flow(graph, geometry).count
}

/// Max-flow with unit vertex capacities on split vertices; arcs run
/// `S⁻ → Λ`, `Λ → Λ` and `Λ → S⁺` only, so every flow path is a crossing.
pub fn crossing_flow(graph: &WeightedGraph, geometry: &StripeGeometry) -> CrossingFlow {
    let n = graph.vertex_count();
    let regions: Vec<Region> = (0..n).map(|v| geometry.classify(graph.position(v))).collect();
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for (v, r) in regions.iter().enumerate() {
        if r.in_stripe() {
            net.add(2 * v, 2 * v + 1, 1);
        }
        match r {
            Region::Left => net.add(source, 2 * v, INF),
            Region::Right => net.add(2 * v + 1, sink, INF),
            _ => {}
        }
    }
    for e in graph.edges() {
        let (ri, rj) = (regions[e.i], regions[e.j]);
        if !crossing_pair(ri, rj) {
            continue;
        }
        for (a, b, ra, rb) in [(e.i, e.j, ri, rj), (e.j, e.i, rj, ri)] {
            let forward = (ra == Region::Left && rb == Region::Box)
                || (ra == Region::Box && rb == Region::Box)
                || (ra == Region::Box && rb == Region::Right);
            if forward {
                net.add(2 * a + 1, 2 * b, INF);
            }
        }
    }
    let count = net.max_flow(source, sink) as usize;
    let seen = net.reachable(source);
    let cut = (0..n).filter(|&v| regions[v].in_stripe() && seen[2 * v] && !seen[2 * v + 1]).collect();
    CrossingFlow { count, cut }
}

/// Largest vertex count accepted by [`brute_force_crossings`].
pub const BRUTE_FORCE_LIMIT: usize = 14;

/// Exhaustive `N_ℓ` for graphs with at most 14 vertices.
///
/// Enumerates every vertex subset, keeps the inclusion-minimal ones that
/// carry a crossing (vertex sets of induced crossings) and finds the largest
/// family of pairwise disjoint minimal sets by memoized search.
pub fn brute_force_crossings(graph: &WeightedGraph, geometry: &StripeGeometry) -> Result<usize> {
    let n = graph.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Size { vertices: n, max: BRUTE_FORCE_LIMIT });
    }
    let regions: Vec<Region> = (0..n).map(|v| geometry.classify(graph.position(v))).collect();
    let edges: Vec<(usize, usize)> =
        graph.edges().iter().filter(|e| crossing_pair(regions[e.i], regions[e.j])).map(|e| (e.i, e.j)).collect();
    let full = 1usize << n;
    let crosses: Vec<bool> = (0..full)
        .map(|mask| {
            let mut uf = UnionFind::new(n + 2);
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    match regions[v] {
                        Region::Left => {
                            uf.union(v, n);
                        }
                        Region::Right => {
                            uf.union(v, n + 1);
                        }
                        _ => {}
                    }
                }
            }
            for &(i, j) in &edges {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                    uf.union(i, j);
                }
            }
            uf.connected(n, n + 1)
        })
        .collect();
    let minimal: Vec<usize> = (1..full)
        .filter(|&m| crosses[m] && (0..n).all(|v| m >> v & 1 == 0 || !crosses[m & !(1 << v)]))
        .collect();
    let mut memo = HashMap::new();
    Ok(pack(full - 1, &minimal, &mut memo))
}

fn pack(mask: usize, minimal: &[usize], memo: &mut HashMap<usize, usize>) -> usize {
    if mask == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let low = mask & mask.wrapping_neg();
    let mut best = pack(mask & !low, minimal, memo);
    for &m in minimal {
        if m & low != 0 && m & mask == m {
            best = best.max(1 + pack(mask & !m, minimal, memo));
        }
    }
    memo.insert(mask, best);
    best
}

/// `N²/(2N + n_box)` and, for `n_box > 0`, the weaker `N²/(3 n_box)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingBound {
    pub tight: f64,
    pub weak: Option<f64>,
}

pub fn crossing_lower_bound(count: usize, n_box: usize) -> CrossingBound {
    if count == 0 {
        return CrossingBound { tight: 0.0, weak: (n_box > 0).then_some(0.0) };
    }
    let nf = count as f64;
    CrossingBound {
        tight: nf * nf / (2.0 * nf + n_box as f64),
        weak: (n_box > 0).then(|| nf * nf / (3.0 * n_box as f64)),
    }
}

/// Number of graph vertices in the open box `Λ_ℓ`.
pub fn box_vertex_count(graph: &WeightedGraph, geometry: &StripeGeometry) -> usize {
    (0..graph.vertex_count()).filter(|&v| geometry.classify(graph.position(v)) == Region::Box).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRow {
    pub ell: f64,
    /// Mean of `N_ℓ / ℓ^{d−1}`.
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
    /// Mean number of `S⁻` vertices, an upper bound for `N_ℓ`.
    pub mean_left: f64,
}

/// Monte-Carlo `N_ℓ/ℓ^{d−1}` for `G[ζ,β]` across box sides.
pub fn crossing_density_scan(model: &ThresholdModel, ells: &[f64], replicas: usize, seed: RngSeed) -> Result<Vec<DensityRow>> {
    if replicas == 0 {
        return Err(Error::Parameter("need at least one replica".into()));
    }
    ells.iter()
        .enumerate()
        .map(|(k, &ell)| {
            let geometry = StripeGeometry::new(model.dim, ell)?;
            let level = seed.child(k as u64);
            let rows = (0..replicas as u64)
                .into_par_iter()
                .map(|r| {
                    let conf = sample_for_crossing(model, ell, level.child(r))?;
                    let graph = build_threshold_graph(&conf, model.zeta, model.beta)?;
                    let left = (0..graph.vertex_count())
                        .filter(|&v| geometry.classify(graph.position(v)) == Region::Left)
                        .count();
                    let count = max_vertex_disjoint_crossings(&graph, &geometry);
                    Ok((count as f64 / ell.powi(model.dim as i32 - 1), left as f64))
                })
                .collect::<Result<Vec<(f64, f64)>>>()?;
            let ratios: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let (mean, stderr) = mean_stderr(&ratios);
            Ok(DensityRow {
                ell,
                mean,
                stderr,
                replicas,
                mean_left: rows.iter().map(|r| r.1).sum::<f64>() / replicas as f64,
            })
        })
        .collect()
}
