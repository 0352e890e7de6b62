//! The electrical problem on `MA[β,ℓ]`: potentials, `σ_ℓ` and Mott-law scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crossings::{box_vertex_count, max_vertex_disjoint_crossings};
use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{Region, StripeGeometry};
use crate::graph::{build_ma_network, build_threshold_graph, energy_term, WeightedGraph};
use crate::cells::distance;
use crate::law::EnergyLaw;
use crate::percolation::{crossing_pair, predicted_zeta_c_with_radius};
use crate::point_process::{sample_marked_ppp, MarkedConfiguration};
use crate::rng::RngSeed;
use crate::stats::{linear_fit, mean_stderr, LinearFit};

/// The filaments of a network with their boundary data.
///
/// Filaments are the edges with both endpoints in the stripe and at least
/// one in `Λ`; other edges of the input graph are ignored.
#[derive(Debug, Clone)]
pub struct Circuit {
    regions: Vec<Region>,
    start: Vec<usize>,
    target: Vec<usize>,
    weight: Vec<f64>,
}

impl Circuit {
    pub fn new(graph: &WeightedGraph, geometry: &StripeGeometry) -> Self {
        let n = graph.vertex_count();
        let regions: Vec<Region> = (0..n).map(|v| geometry.classify(graph.position(v))).collect();
        let filaments: Vec<_> = graph.edges().iter().filter(|e| crossing_pair(regions[e.i], regions[e.j])).collect();
        let mut start = vec![0usize; n + 1];
        for e in &filaments {
            start[e.i + 1] += 1;
            start[e.j + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut target = vec![0; start[n]];
        let mut weight = vec![0.0; start[n]];
        for e in &filaments {
            for (a, b) in [(e.i, e.j), (e.j, e.i)] {
                target[fill[a]] = b;
                weight[fill[a]] = e.weight;
                fill[a] += 1;
            }
        }
        Self { regions, start, target, weight }
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn region(&self, v: usize) -> Region {
        self.regions[v]
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.start[v]..self.start[v + 1];
        self.target[r.clone()].iter().copied().zip(self.weight[r].iter().copied())
    }

    /// Each filament once, as `(x, y, c)` with `x < y`.
    fn filaments(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).flat_map(move |x| self.neighbors(x).filter(move |&(y, _)| x < y).map(move |(y, c)| (x, y, c)))
    }

    fn boundary_value(&self, v: usize) -> Option<f64> {
        match self.regions[v] {
            Region::Left => Some(1.0),
            Region::Right | Region::Outside => Some(0.0),
            Region::Box => None,
        }
    }

    /// Exact potential for `Λ` nodes whose filament component touches at most
    /// one of `S⁻`, `S⁺` (1 if it touches `S⁻`, 0 otherwise); `None` for nodes
    /// that carry current and must be solved for.
    fn settled_values(&self) -> Vec<Option<f64>> {
        let n = self.len();
        let mut value = vec![None; n];
        let mut seen = vec![false; n];
        let mut component = Vec::new();
        for root in 0..n {
            if self.regions[root] != Region::Box || seen[root] {
                continue;
            }
            seen[root] = true;
            component.clear();
            component.push(root);
            let (mut left, mut right) = (false, false);
            let mut k = 0;
            while k < component.len() {
                let v = component[k];
                k += 1;
                for (u, _) in self.neighbors(v) {
                    match self.regions[u] {
                        Region::Left => left = true,
                        Region::Right => right = true,
                        Region::Box if !seen[u] => {
                            seen[u] = true;
                            component.push(u);
                        }
                        _ => {}
                    }
                }
            }
            if !(left && right) {
                let fixed = if left { 1.0 } else { 0.0 };
                for &v in &component {
                    value[v] = Some(fixed);
                }
            }
        }
        value
    }

    /// Harmonic potential with `V = 1` on `S⁻`, `V = 0` on `S⁺`, by
    /// Jacobi-preconditioned conjugate gradients on the `Λ` nodes whose
    /// component touches both sides.
    ///
    /// Stops once every live node has `|Σ_y c_xy (V(x) − V(y))| ≤ tol · c_x`.
    pub fn solve(&self, tol: f64) -> Result<PotentialSolution> {
        ensure_positive("solver tolerance", tol)?;
        let n = self.len();
        let settled = self.settled_values();
        let mut potential: Vec<f64> = (0..n).map(|v| self.boundary_value(v).or(settled[v]).unwrap_or(0.0)).collect();
        let unknowns: Vec<usize> = (0..n).filter(|&v| self.regions[v] == Region::Box && settled[v].is_none()).collect();
        let m = unknowns.len();
        if m == 0 {
            return Ok(PotentialSolution { potential, residual: 0.0, iterations: 0 });
        }
        let mut slot = vec![usize::MAX; n];
        for (k, &v) in unknowns.iter().enumerate() {
            slot[v] = k;
        }
        let mut diag = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for (k, &v) in unknowns.iter().enumerate() {
            for (u, c) in self.neighbors(v) {
                diag[k] += c;
                if self.regions[u] == Region::Left {
                    rhs[k] += c;
                }
            }
        }
        let apply = |x: &[f64], out: &mut [f64]| {
            for (k, &v) in unknowns.iter().enumerate() {
                let mut acc = diag[k] * x[k];
                for (u, c) in self.neighbors(v) {
                    if slot[u] != usize::MAX {
                        acc -= c * x[slot[u]];
                    }
                }
                out[k] = acc;
            }
        };
        let scaled_residual = |r: &[f64]| r.iter().zip(&diag).map(|(r, d)| (r / d).abs()).fold(0.0, f64::max);
        let cap = (20 * m).max(1000);
        let mut x: Vec<f64> = vec![0.5; m];
        let mut r = vec![0.0; m];
        let mut ap = vec![0.0; m];
        let mut iterations = 0;
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(a, b)| a * b).sum::<f64>();
        loop {
            // (re)start from the true residual
            apply(&x, &mut ap);
            for k in 0..m {
                r[k] = rhs[k] - ap[k];
            }
            if scaled_residual(&r) <= tol {
                break;
            }
            if iterations >= cap {
                return Err(Error::Solver { iterations, residual: scaled_residual(&r) });
            }
            let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
            let mut p = z.clone();
            let mut rz = dot(&r, &z);
            let restart_at = iterations + m.max(50);
            while iterations < cap && iterations < restart_at {
                apply(&p, &mut ap);
                let pap = dot(&p, &ap);
                if !(pap > 0.0) {
                    break;
                }
                let a = rz / pap;
                for k in 0..m {
                    x[k] += a * p[k];
                    r[k] -= a * ap[k];
                }
                iterations += 1;
                if scaled_residual(&r) <= tol * 0.5 {
                    break;
                }
                for k in 0..m {
                    z[k] = r[k] / diag[k];
                }
                let rz_new = dot(&r, &z);
                let b = rz_new / rz;
                rz = rz_new;
                for k in 0..m {
                    p[k] = z[k] + b * p[k];
                }
            }
        }
        let residual = scaled_residual(&r);
        for (k, &v) in unknowns.iter().enumerate() {
            potential[v] = x[k];
        }
        Ok(PotentialSolution { potential, residual, iterations })
    }

    /// `Σ_{x∈S⁻, y∈Λ} c_xy (V(x) − V(y))`.
    pub fn boundary_flux(&self, solution: &PotentialSolution) -> f64 {
        let v = &solution.potential;
        let mut sum = 0.0;
        for x in 0..self.len() {
            if self.regions[x] == Region::Left {
                for (y, c) in self.neighbors(x) {
                    sum += c * (v[x] - v[y]);
                }
            }
        }
        sum
    }

    /// `Σ_filaments c_xy (V(x) − V(y))²`.
    pub fn dissipated_energy(&self, solution: &PotentialSolution) -> f64 {
        self.energy_of(&solution.potential)
    }

    fn energy_of(&self, u: &[f64]) -> f64 {
        self.filaments().map(|(x, y, c)| c * (u[x] - u[y]).powi(2)).sum()
    }

    /// Signed current through the hyperplane `{x₁ = γ}` from left to right.
    pub fn hyperplane_flux(&self, graph: &WeightedGraph, solution: &PotentialSolution, gamma: f64) -> HyperplaneFlux {
        let v = &solution.potential;
        let mut current = 0.0;
        let mut spanning = 0;
        for (x, y, c) in self.filaments() {
            let (x1, y1) = (graph.position(x)[0], graph.position(y)[0]);
            let (a, b) = if x1 <= y1 { (x, y) } else { (y, x) };
            let (a1, b1) = (x1.min(y1), x1.max(y1));
            if a1 <= gamma && gamma < b1 {
                current += c * (v[a] - v[b]);
                spanning += 1;
            }
        }
        HyperplaneFlux { current, spanning }
    }

    /// `D(u) = Σ_filaments c_xy (u(y) − u(x))²` for `u` with `u = 1` on `S⁻`,
    /// `u = 0` on `S⁺` and values in `[0, 1]`.
    pub fn dirichlet_energy(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.len() {
            return Err(Error::Domain(format!("test function has {} values for {} nodes", u.len(), self.len())));
        }
        for (v, &val) in u.iter().enumerate() {
            if !(0.0..=1.0).contains(&val) {
                return Err(Error::Domain(format!("value {val} at node {v} is outside [0, 1]")));
            }
            let fixed = match self.regions[v] {
                Region::Left => Some(1.0),
                Region::Right => Some(0.0),
                _ => None,
            };
            if let Some(b) = fixed {
                if val != b {
                    return Err(Error::Domain(format!("node {v} must carry boundary value {b}, got {val}")));
                }
            }
        }
        Ok(self.energy_of(u))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSolution {
    pub potential: Vec<f64>,
    /// Largest `|Σ_y c_xy (V(x) − V(y))| / c_x` over live `Λ` nodes.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperplaneFlux {
    pub current: f64,
    /// Filaments crossing the hyperplane; 0 flags a disconnected slab.
    pub spanning: usize,
}

pub fn solve_potential(network: &WeightedGraph, geometry: &StripeGeometry, tol: f64) -> Result<PotentialSolution> {
    Circuit::new(network, geometry).solve(tol)
}

pub fn conductivity_boundary_flux(network: &WeightedGraph, geometry: &StripeGeometry, solution: &PotentialSolution) -> f64 {
    Circuit::new(network, geometry).boundary_flux(solution)
}

pub fn dissipated_energy(network: &WeightedGraph, geometry: &StripeGeometry, solution: &PotentialSolution) -> f64 {
    Circuit::new(network, geometry).dissipated_energy(solution)
}

pub fn hyperplane_flux(
    network: &WeightedGraph,
    geometry: &StripeGeometry,
    solution: &PotentialSolution,
    gamma: f64,
) -> Result<HyperplaneFlux> {
    let half = geometry.ell / 2.0;
    if !(gamma >= -half && gamma < half) {
        return Err(Error::Domain(format!("hyperplane {gamma} is outside [−ℓ/2, ℓ/2)")));
    }
    Ok(Circuit::new(network, geometry).hyperplane_flux(network, solution, gamma))
}

pub fn dirichlet_energy(network: &WeightedGraph, geometry: &StripeGeometry, u: &[f64]) -> Result<f64> {
    Circuit::new(network, geometry).dirichlet_energy(u)
}

/// `σ_ℓ(G)` for any weighted graph, by boundary flux (0 without a `Λ` node).
pub fn sigma(graph: &WeightedGraph, geometry: &StripeGeometry, tol: f64) -> Result<f64> {
    let circuit = Circuit::new(graph, geometry);
    let solution = circuit.solve(tol)?;
    Ok(circuit.boundary_flux(&solution))
}

/// How the conductance cutoff `c_min = e^{−ζ_cut}` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Cutoff {
    /// Use exactly this `ζ_cut`.
    Fixed { zeta_cut: f64 },
    /// Raise `ζ_cut` from `start` until the dropped filaments carry total
    /// conductance at most `rel_tol · σ_cut`, which bounds the relative
    /// error `(σ − σ_cut)/σ_cut` by `rel_tol`. `ζ_cut` never exceeds the
    /// sampled padding.
    Adaptive { rel_tol: f64, start: f64 },
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::Adaptive { rel_tol: 1e-6, start: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConductivityOptions {
    pub tol: f64,
    pub cutoff: Cutoff,
}

impl Default for ConductivityOptions {
    fn default() -> Self {
        Self { tol: 1e-10, cutoff: Cutoff::default() }
    }
}

/// `σ_ℓ` on a cutoff network, with what the cutoff left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConductivityReport {
    /// `σ_ℓ` of the retained network, a lower bound for the full one.
    pub sigma: f64,
    /// `ℓ^{2−d} σ_ℓ`.
    pub rescaled: f64,
    pub zeta_cut: f64,
    pub c_min: f64,
    /// Total conductance of the sampled filaments below `c_min`; the full
    /// `σ_ℓ` is at most `sigma + dropped`.
    pub dropped: f64,
    /// Whether the adaptive rule met its tolerance before the padding cap.
    pub cutoff_converged: bool,
    pub box_nodes: usize,
    pub filaments: usize,
    pub iterations: usize,
    pub residual: f64,
}

/// Distance from `Λ` to the nearest `x₁`-face of the sampling window.
fn available_pad(conf: &MarkedConfiguration, geometry: &StripeGeometry) -> f64 {
    let w = conf.window();
    (-geometry.ell / 2.0 - w.lo[0]).min(w.hi[0] - geometry.ell / 2.0).max(0.0)
}

/// Sum of conductances `< c_min` over sampled filament pairs.
fn dropped_conductance(conf: &MarkedConfiguration, beta: f64, geometry: &StripeGeometry, c_min: f64) -> f64 {
    let stripe: Vec<(usize, Region)> = (0..conf.len())
        .map(|i| (i, geometry.classify(conf.position(i))))
        .filter(|(_, r)| r.in_stripe())
        .collect();
    let mut total = 0.0;
    for (a, &(i, ri)) in stripe.iter().enumerate() {
        if ri != Region::Box {
            continue;
        }
        for (b, &(j, rj)) in stripe.iter().enumerate() {
            // each box-box pair once, each box-boundary pair once
            if a == b || (rj == Region::Box && b < a) {
                continue;
            }
            let r = distance(conf.position(i), conf.position(j));
            let c = (-r - beta * energy_term(conf.mark(i), conf.mark(j))).exp();
            if c < c_min {
                total += c;
            }
        }
    }
    total
}

/// `ℓ^{2−d} σ_ℓ(ω, β)` on `MA[β,ℓ]` with the configured cutoff.
pub fn rescaled_conductivity(
    conf: &MarkedConfiguration,
    beta: f64,
    geometry: &StripeGeometry,
    options: &ConductivityOptions,
) -> Result<ConductivityReport> {
    let pad = available_pad(conf, geometry);
    let scale = geometry.ell.powi(2 - geometry.dim as i32);
    let evaluate = |zeta_cut: f64| -> Result<(f64, usize, usize, PotentialSolution)> {
        let network = build_ma_network(conf, beta, geometry, (-zeta_cut).exp())?;
        let circuit = Circuit::new(&network, geometry);
        let solution = circuit.solve(options.tol)?;
        let n_box = (0..circuit.len()).filter(|&v| circuit.region(v) == Region::Box).count();
        Ok((circuit.boundary_flux(&solution), n_box, network.edge_count(), solution))
    };
    let report = |zeta_cut: f64, converged: bool, run: (f64, usize, usize, PotentialSolution), dropped: f64| {
        ConductivityReport {
            sigma: run.0,
            rescaled: scale * run.0,
            zeta_cut,
            c_min: (-zeta_cut).exp(),
            dropped,
            cutoff_converged: converged,
            box_nodes: run.1,
            filaments: run.2,
            iterations: run.3.iterations,
            residual: run.3.residual,
        }
    };
    match options.cutoff {
        Cutoff::Fixed { zeta_cut } => {
            ensure_positive("zeta_cut", zeta_cut)?;
            let run = evaluate(zeta_cut)?;
            let dropped = dropped_conductance(conf, beta, geometry, (-zeta_cut).exp());
            Ok(report(zeta_cut, true, run, dropped))
        }
        Cutoff::Adaptive { rel_tol, start } => {
            ensure_positive("cutoff tolerance", rel_tol)?;
            ensure_positive("initial zeta_cut", start)?;
            let mut zeta_cut = start.min(pad.max(f64::MIN_POSITIVE));
            loop {
                let run = evaluate(zeta_cut)?;
                let dropped = dropped_conductance(conf, beta, geometry, (-zeta_cut).exp());
                let target = rel_tol * run.0;
                if dropped <= target {
                    return Ok(report(zeta_cut, true, run, dropped));
                }
                if zeta_cut >= pad {
                    return Ok(report(zeta_cut, false, run, dropped));
                }
                // dropped mass decays roughly like e^{−ζ_cut}
                let step = if target > 0.0 { (dropped / target).ln() + 0.5 } else { 2.0 };
                zeta_cut = (zeta_cut + step.max(0.5)).min(pad);
            }
        }
    }
}

/// The two lower bounds obtained by thinning to `G[1,1](ω_{ζ,β})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThinnedBound {
    /// `e^{−ζ} ζ^{2−d} L^{2−d} σ_L(G[1,1](ω_{ζ,β}), 1)` with `L = ℓ/ζ`.
    pub value: f64,
    /// `e^{−ζ} (ζL)^{2−d} N_L² / (3 |V ∩ Λ_L|)` (0 when `N_L = 0`).
    pub crossing_bound: f64,
    pub sigma_unit: f64,
    pub crossings: usize,
    pub box_nodes: usize,
}

pub fn thinned_lower_bound(
    conf: &MarkedConfiguration,
    zeta: f64,
    beta: f64,
    geometry: &StripeGeometry,
    tol: f64,
) -> Result<ThinnedBound> {
    let rescaled = conf.mott_rescale(zeta, beta)?;
    let geometry_l = geometry.scaled(1.0 / zeta);
    let graph = build_threshold_graph(&rescaled, 1.0, 1.0)?.unit_weights();
    let sigma_unit = sigma(&graph, &geometry_l, tol)?;
    let crossings = max_vertex_disjoint_crossings(&graph, &geometry_l);
    let box_nodes = box_vertex_count(&graph, &geometry_l);
    let d = geometry.dim as i32;
    let big_l = geometry_l.ell;
    let prefactor = (-zeta).exp() * zeta.powi(2 - d) * big_l.powi(2 - d);
    let crossing_bound = if crossings == 0 {
        0.0
    } else {
        prefactor * (crossings * crossings) as f64 / (3.0 * box_nodes as f64)
    };
    Ok(ThinnedBound { value: prefactor * sigma_unit, crossing_bound, sigma_unit, crossings, box_nodes })
}

/// Inputs of a Mott-law scan over `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MottPlan {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub betas: Vec<f64>,
    /// Critical intensity used both for the box size and the reference slope.
    pub lambda_star: f64,
    /// `ℓ(β) = l_factor · ζ_c(β)` with `ζ_c` predicted from `lambda_star`.
    pub l_factor: f64,
    pub replicas: usize,
    pub seed: RngSeed,
    pub options: ConductivityOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MottRow {
    pub beta: f64,
    pub beta_pow: f64,
    pub mean_ln_sigma: f64,
    pub stderr: f64,
    pub censored_fraction: f64,
    pub ell: f64,
    pub replicas: usize,
    /// Mean of `ln` of the thinning lower bound at `ζ = ζ_c(β)` over the
    /// uncensored replicas where that bound is positive.
    pub mean_ln_lower_bound: f64,
    /// Uncensored replicas whose thinning bound is 0 (no crossing at `ζ_c`).
    pub zero_lower_bounds: usize,
    /// Replicas with thinning bound above the measured `ℓ^{2−d}σ_ℓ`.
    pub bound_violations: usize,
    pub cutoff_unconverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MottScan {
    pub rows: Vec<MottRow>,
    pub fit: LinearFit,
    pub slope_interval: (f64, f64),
    /// `χ = −(λ* C₀^{α+1}/ρ)^{1/(α+1+d)}`.
    pub reference_slope: f64,
}

/// Monte-Carlo `E ln(ℓ^{2−d} σ_ℓ)` against `β^{(α+1)/(α+1+d)}`.
pub fn mott_scan(plan: &MottPlan) -> Result<MottScan> {
    let class = plan
        .law
        .power_class()
        .ok_or_else(|| Error::Parameter("mott scan needs a power-law class".into()))?;
    if plan.betas.windows(2).any(|w| w[1] <= w[0]) || plan.betas.len() < 2 {
        return Err(Error::Parameter("beta list must be increasing with at least two entries".into()));
    }
    if plan.replicas == 0 {
        return Err(Error::Parameter("need at least one replica".into()));
    }
    let k = class.alpha + 1.0 + plan.dim as f64;
    let exponent = (class.alpha + 1.0) / k;
    let mut rows = Vec::with_capacity(plan.betas.len());
    let mut reference_slope = f64::NAN;
    for (b, &beta) in plan.betas.iter().enumerate() {
        let prediction =
            predicted_zeta_c_with_radius(plan.lambda_star, plan.rho, class.c0, class.alpha, plan.dim, beta, class.epsilon)?;
        reference_slope = prediction.chi;
        let zeta_c = prediction.zeta_c;
        let ell = plan.l_factor * zeta_c;
        let geometry = StripeGeometry::new(plan.dim, ell)?;
        let pad = match plan.options.cutoff {
            Cutoff::Fixed { zeta_cut } => zeta_cut,
            Cutoff::Adaptive { start, .. } => (4.0 * start).max(3.0 * zeta_c),
        };
        let level = plan.seed.child(b as u64);
        let outcomes = (0..plan.replicas as u64)
            .into_par_iter()
            .map(|r| {
                let conf = sample_marked_ppp(plan.rho, &plan.law, &geometry.padded_window(pad), level.child(r))?;
                let report = match rescaled_conductivity(&conf, beta, &geometry, &plan.options) {
                    Ok(rep) => rep,
                    Err(Error::EmptyRegion(_)) => return Ok(None),
                    Err(e) => return Err(e),
                };
                if report.sigma <= 0.0 {
                    return Ok(None);
                }
                let bound = thinned_lower_bound(&conf, zeta_c, beta, &geometry, plan.options.tol)?;
                Ok(Some((report.rescaled, bound.value, report.cutoff_converged)))
            })
            .collect::<Result<Vec<_>>>()?;
        let kept: Vec<(f64, f64, bool)> = outcomes.iter().flatten().copied().collect();
        let ln_sigma: Vec<f64> = kept.iter().map(|k| k.0.ln()).collect();
        let (mean, stderr) = mean_stderr(&ln_sigma);
        let bounds: Vec<f64> = kept.iter().filter(|k| k.1 > 0.0).map(|k| k.1.ln()).collect();
        rows.push(MottRow {
            beta,
            beta_pow: beta.powf(exponent),
            mean_ln_sigma: mean,
            stderr,
            censored_fraction: 1.0 - kept.len() as f64 / plan.replicas as f64,
            ell,
            replicas: plan.replicas,
            mean_ln_lower_bound: if bounds.is_empty() {
                f64::NEG_INFINITY
            } else {
                bounds.iter().sum::<f64>() / bounds.len() as f64
            },
            zero_lower_bounds: kept.len() - bounds.len(),
            bound_violations: kept.iter().filter(|k| k.1 > k.0).count(),
            cutoff_unconverged: kept.iter().filter(|k| !k.2).count(),
        });
    }
    let usable: Vec<&MottRow> = rows.iter().filter(|r| r.mean_ln_sigma.is_finite()).collect();
    let xs: Vec<f64> = usable.iter().map(|r| r.beta_pow).collect();
    let ys: Vec<f64> = usable.iter().map(|r| r.mean_ln_sigma).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(MottScan { slope_interval: fit.slope_interval(0.95), fit, rows, reference_slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> StripeGeometry {
        StripeGeometry::new(2, 2.0).unwrap()
    }

    fn chain(c1: f64, c2: f64) -> WeightedGraph {
        let pts = [(vec![-1.5, 0.0], 0.0), (vec![0.0, 0.0], 0.0), (vec![1.5, 0.0], 0.0)];
        let coords = pts.iter().flat_map(|p| p.0.clone()).collect();
        WeightedGraph::new(2, coords, vec![0.0; 3], vec![(0, 1, c1), (1, 2, c2)]).unwrap()
    }

    #[test]
    fn series_chains() {
        let g = chain(1.0, 1.0);
        let s = solve_potential(&g, &geom(), 1e-12).unwrap();
        assert!((s.potential[1] - 0.5).abs() < 1e-12);
        // V(m) = c_left / (c_left + c_right)
        let g = chain(3.0, 1.0);
        let s = solve_potential(&g, &geom(), 1e-12).unwrap();
        assert!((s.potential[1] - 0.75).abs() < 1e-12);
        let g = chain(1.0, 3.0);
        let s = solve_potential(&g, &geom(), 1e-12).unwrap();
        assert!((s.potential[1] - 0.25).abs() < 1e-12);
        let g = chain(2.0, 2.0);
        let s = solve_potential(&g, &geom(), 1e-12).unwrap();
        assert!((conductivity_boundary_flux(&g, &geom(), &s) - 1.0).abs() < 1e-12);
        assert!((dissipated_energy(&g, &geom(), &s) - 1.0).abs() < 1e-12);
        for gamma in [-1.0, -0.5, 0.0, 0.9] {
            let h = hyperplane_flux(&g, &geom(), &s, gamma).unwrap();
            assert!((h.current - 1.0).abs() < 1e-12 && h.spanning == 1);
        }
    }

    #[test]
    fn parallel_chains_and_disconnection() {
        let pts: Vec<(Vec<f64>, f64)> = [(-1.5, 0.5), (0.0, 0.5), (1.5, 0.5), (-1.5, -0.5), (0.0, -0.5), (1.5, -0.5)]
            .iter()
            .map(|&(x, y)| (vec![x, y], 0.0))
            .collect();
        let g = WeightedGraph::from_points(2, &pts, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert!((sigma(&g, &geom(), 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let cut = WeightedGraph::from_points(2, &pts, &[(0, 1), (4, 5)]).unwrap();
        let s = solve_potential(&cut, &geom(), 1e-12).unwrap();
        assert_eq!(conductivity_boundary_flux(&cut, &geom(), &s), 0.0);
        let h = hyperplane_flux(&cut, &geom(), &s, 0.5).unwrap();
        assert_eq!(h.current, 0.0);
        let h = hyperplane_flux(&cut, &geom(), &s, -0.99).unwrap();
        assert_eq!(h.spanning, 1);
    }

    #[test]
    fn dead_components_are_grounded() {
        let pts: Vec<(Vec<f64>, f64)> =
            [(-1.5, 0.0), (0.0, 0.0), (1.5, 0.0), (0.2, 0.5), (0.4, 0.5)].iter().map(|&(x, y)| (vec![x, y], 0.0)).collect();
        let g = WeightedGraph::from_points(2, &pts, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let s = solve_potential(&g, &geom(), 1e-12).unwrap();
        assert_eq!((s.potential[3], s.potential[4]), (0.0, 0.0));
    }

    #[test]
    fn dirichlet_checks_boundary() {
        let g = chain(1.0, 1.0);
        let c = Circuit::new(&g, &geom());
        assert!((c.dirichlet_energy(&[1.0, 0.5, 0.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((c.dirichlet_energy(&[1.0, 1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(c.dirichlet_energy(&[0.9, 0.5, 0.0]).is_err());
        assert!(c.dirichlet_energy(&[1.0, 1.5, 0.0]).is_err());
        assert!(c.dirichlet_energy(&[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn hyperplane_outside_range_rejected() {
        let g = chain(1.0, 1.0);
        let s = solve_potential(&g, &geom(), 1e-12).unwrap();
        assert!(hyperplane_flux(&g, &geom(), &s, 1.0).is_err());
    }

    #[test]
    fn adaptive_cutoff_meets_tolerance() {
        let geometry = StripeGeometry::new(2, 6.0).unwrap();
        let conf = sample_marked_ppp(1.0, &EnergyLaw::uniform_signed(), &geometry.padded_window(25.0), RngSeed::new(7)).unwrap();
        let opts = ConductivityOptions { tol: 1e-10, cutoff: Cutoff::Adaptive { rel_tol: 1e-6, start: 4.0 } };
        let rep = rescaled_conductivity(&conf, 1.0, &geometry, &opts).unwrap();
        assert!(rep.cutoff_converged);
        assert!(rep.dropped <= 1e-6 * rep.sigma);
        let full = rescaled_conductivity(&conf, 1.0, &geometry, &ConductivityOptions { tol: 1e-10, cutoff: Cutoff::Fixed { zeta_cut: 25.0 } }).unwrap();
        assert!(rep.sigma <= full.sigma * (1.0 + 1e-9));
        assert!(full.sigma <= rep.sigma + rep.dropped + 1e-12);
    }
}
