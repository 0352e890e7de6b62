//! Mott's random walk: the continuous-time walk with jump rates `c_xy`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::cells::for_each_pair_within;
use crate::error::{ensure_positive, Error, Result};
use crate::graph::energy_term;
use crate::law::EnergyLaw;
use crate::point_process::{sample_marked_ppp, MarkedConfiguration};
use crate::geometry::Window;
use crate::rng::RngSeed;

/// Jump rates `c_xy ≥ c_min` between the points of a configuration.
#[derive(Debug, Clone)]
pub struct WalkNetwork {
    dim: usize,
    coords: Vec<f64>,
    start: Vec<usize>,
    target: Vec<usize>,
    /// Running sums of rates within each row.
    cumulative: Vec<f64>,
    /// Points within the cutoff range of the window boundary.
    exposed: Vec<bool>,
}

impl WalkNetwork {
    pub fn new(conf: &MarkedConfiguration, beta: f64, c_min: f64) -> Result<Self> {
        ensure_positive("beta", beta)?;
        if !(c_min > 0.0 && c_min < 1.0) {
            return Err(Error::Parameter(format!("c_min must lie in (0, 1), got {c_min}")));
        }
        let n = conf.len();
        let dim = conf.dim();
        let reach = -c_min.ln();
        let marks = conf.marks();
        let mut pairs = Vec::new();
        for_each_pair_within(conf.coords(), dim, reach, |i, j, r| {
            let c = (-r - beta * energy_term(marks[i], marks[j])).exp();
            if r > 0.0 && c >= c_min {
                pairs.push((i, j, c));
            }
        });
        let mut start = vec![0usize; n + 1];
        for &(i, j, _) in &pairs {
            start[i + 1] += 1;
            start[j + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut target = vec![0; start[n]];
        let mut rate = vec![0.0; start[n]];
        for &(i, j, c) in &pairs {
            for (a, b) in [(i, j), (j, i)] {
                target[fill[a]] = b;
                rate[fill[a]] = c;
                fill[a] += 1;
            }
        }
        // fixed neighbour order keeps trajectories independent of pair enumeration
        let mut cumulative = vec![0.0; start[n]];
        for v in 0..n {
            let row = start[v]..start[v + 1];
            let mut entries: Vec<(usize, f64)> = target[row.clone()].iter().copied().zip(rate[row.clone()].iter().copied()).collect();
            entries.sort_unstable_by_key(|e| e.0);
            let mut acc = 0.0;
            for (k, (t, c)) in row.zip(entries) {
                acc += c;
                target[k] = t;
                cumulative[k] = acc;
            }
        }
        let window = conf.window();
        let exposed = (0..n).map(|v| window.distance_to_boundary(conf.position(v)) < reach).collect();
        Ok(Self { dim, coords: conf.coords().to_vec(), start, target, cumulative, exposed })
    }

    pub fn len(&self) -> usize {
        self.start.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total jump rate `c_x = Σ_y c_xy`.
    pub fn total_rate(&self, v: usize) -> f64 {
        if self.start[v + 1] > self.start[v] {
            self.cumulative[self.start[v + 1] - 1]
        } else {
            0.0
        }
    }

    /// `c_xy` (0 if below the cutoff or `x = y`).
    pub fn rate(&self, x: usize, y: usize) -> f64 {
        let row = self.start[x]..self.start[x + 1];
        match self.target[row.clone()].binary_search(&y) {
            Ok(k) => {
                let k = row.start + k;
                self.cumulative[k] - if k > row.start { self.cumulative[k - 1] } else { 0.0 }
            }
            Err(_) => 0.0,
        }
    }

    fn position(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    /// Runs the walk from `start` until time `t_max`.
    pub fn simulate(&self, start: usize, t_max: f64, seed: RngSeed) -> Result<Trajectory> {
        if start >= self.len() {
            return Err(Error::Parameter(format!("start index {start} out of range")));
        }
        ensure_positive("t_max", t_max)?;
        let mut rng = seed.rng();
        let mut times = vec![0.0];
        let mut states = vec![start];
        let mut exposed_time = 0.0;
        let mut t = 0.0;
        let mut v = start;
        let absorbed = self.total_rate(start) == 0.0;
        loop {
            let rate = self.total_rate(v);
            let hold = if rate > 0.0 {
                let e: f64 = Exp1.sample(&mut rng);
                e / rate
            } else { f64::INFINITY };
            let stay = hold.min(t_max - t);
            if self.exposed[v] {
                exposed_time += stay;
            }
            if t + hold >= t_max {
                break;
            }
            t += hold;
            let row = self.start[v]..self.start[v + 1];
            let u = rng.random::<f64>() * rate;
            let k = self.cumulative[row.clone()].partition_point(|&c| c <= u).min(row.len() - 1);
            v = self.target[row.start + k];
            times.push(t);
            states.push(v);
        }
        let displacement = self.position(v).iter().zip(self.position(start)).map(|(a, b)| a - b).collect();
        Ok(Trajectory { times, states, t_max, displacement, absorbed, boundary_exposure: exposed_time / t_max })
    }
}

/// A path of the walk: `states[k]` is occupied from `times[k]` on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<usize>,
    pub t_max: f64,
    /// Final position minus initial position.
    pub displacement: Vec<f64>,
    /// The start had no neighbours, so the walker never moved.
    pub absorbed: bool,
    /// Fraction of time spent at sites whose cutoff range meets the window
    /// boundary, where jumps to unsampled sites are missing.
    pub boundary_exposure: f64,
}

impl Trajectory {
    /// Time spent at each vertex in `0..n`.
    pub fn occupation(&self, n: usize) -> Vec<f64> {
        let mut occ = vec![0.0; n];
        for k in 0..self.states.len() {
            let end = self.times.get(k + 1).copied().unwrap_or(self.t_max);
            occ[self.states[k]] += end - self.times[k];
        }
        occ
    }
}

/// Walk on `conf` with rates `c_xy ≥ c_min`.
pub fn simulate_walk(
    conf: &MarkedConfiguration,
    beta: f64,
    start: usize,
    t_max: f64,
    c_min: f64,
    seed: RngSeed,
) -> Result<Trajectory> {
    if conf.is_empty() {
        return Err(Error::Parameter("configuration is empty".into()));
    }
    WalkNetwork::new(conf, beta, c_min)?.simulate(start, t_max, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffusionEstimate {
    /// `E[ΔX_k²] / (2t)` per axis.
    pub d_axis: Vec<f64>,
    pub stderr: Vec<f64>,
    pub t: f64,
    pub trajectories: usize,
    pub mean_boundary_exposure: f64,
}

pub const MIN_TRAJECTORIES: usize = 30;

/// Per-axis diffusion coefficient from the displacements at `t_max`.
pub fn estimate_diffusion(trajectories: &[Trajectory], dim: usize) -> Result<DiffusionEstimate> {
    if trajectories.len() < MIN_TRAJECTORIES {
        return Err(Error::Statistics(format!(
            "need at least {MIN_TRAJECTORIES} trajectories, got {}",
            trajectories.len()
        )));
    }
    let t = trajectories[0].t_max;
    if trajectories.iter().any(|tr| tr.t_max != t || tr.displacement.len() != dim) {
        return Err(Error::Statistics("trajectories differ in horizon or dimension".into()));
    }
    let mut d_axis = Vec::with_capacity(dim);
    let mut stderr = Vec::with_capacity(dim);
    for k in 0..dim {
        let xs: Vec<f64> = trajectories.iter().map(|tr| tr.displacement[k].powi(2) / (2.0 * t)).collect();
        let (m, s) = crate::stats::mean_stderr(&xs);
        d_axis.push(m);
        stderr.push(s);
    }
    let mean_boundary_exposure =
        trajectories.iter().map(|tr| tr.boundary_exposure).sum::<f64>() / trajectories.len() as f64;
    Ok(DiffusionEstimate { d_axis, stderr, t, trajectories: trajectories.len(), mean_boundary_exposure })
}

/// Annealed walks from the origin of independent Palm samples of
/// `PPP[ρ, ν]` on `[−R, R]^d`, one environment per trajectory.
#[allow(clippy::too_many_arguments)]
pub fn palm_walks(
    dim: usize,
    rho: f64,
    law: &EnergyLaw,
    beta: f64,
    window_radius: f64,
    t_max: f64,
    c_min: f64,
    trajectories: usize,
    seed: RngSeed,
) -> Result<Vec<Trajectory>> {
    let window = Window::centered_cube(dim, window_radius)?;
    (0..trajectories as u64)
        .into_par_iter()
        .map(|r| {
            let child = seed.child(r);
            let conf = sample_marked_ppp(rho, law, &window, child.child(0))?.palm_augment(law, child.child(1))?;
            simulate_walk(&conf, beta, conf.len() - 1, t_max, c_min, child.child(2))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conf(points: Vec<(Vec<f64>, f64)>) -> MarkedConfiguration {
        MarkedConfiguration::new(Window::centered_cube(1, 10.0).unwrap(), points).unwrap()
    }

    #[test]
    fn single_point_is_absorbed() {
        let c = conf(vec![(vec![0.0], 0.0)]);
        let tr = simulate_walk(&c, 1.0, 0, 5.0, 1e-9, RngSeed::new(1)).unwrap();
        assert!(tr.absorbed);
        assert_eq!(tr.states, vec![0]);
        assert_eq!(tr.displacement, vec![0.0]);
    }

    #[test]
    fn two_state_chain_balances_and_holds_correctly() {
        let c = conf(vec![(vec![0.0], 0.1), (vec![0.5], 0.1)]);
        let net = WalkNetwork::new(&c, 1.0, 1e-9).unwrap();
        let rate = net.total_rate(0);
        assert!((rate - (-0.5f64 - 0.2).exp()).abs() < 1e-15);
        assert_eq!(net.rate(0, 1), net.rate(1, 0));
        let tr = net.simulate(0, 20000.0, RngSeed::new(3)).unwrap();
        let occ = tr.occupation(2);
        assert!((occ[0] / tr.t_max - 0.5).abs() < 0.02);
        let holds: Vec<f64> = tr.times.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = holds.iter().sum::<f64>() / holds.len() as f64;
        let se = (1.0 / rate) / (holds.len() as f64).sqrt();
        assert!((mean - 1.0 / rate).abs() < 4.0 * se);
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn diffusion_needs_enough_trajectories() {
        let tr = Trajectory { times: vec![0.0], states: vec![0], t_max: 1.0, displacement: vec![0.0], absorbed: true, boundary_exposure: 0.0 };
        assert!(estimate_diffusion(&vec![tr.clone(); 10], 1).is_err());
        let est = estimate_diffusion(&vec![tr; 30], 1).unwrap();
        assert_eq!(est.d_axis, vec![0.0]);
    }
}
