//! Parameters and execution of each subcommand.

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hopnet::conductivity::mott_scan;
use hopnet::crossings::crossing_density_scan;
use hopnet::graph::build_ma_network;
use hopnet::percolation::{estimate_zeta_c, predicted_zeta_c};
use hopnet::stats::{mean_stderr, two_proportion_z_test};
use hopnet::*;

use crate::config::ConfigError;
use crate::output::Run;

pub trait Command: Serialize + DeserializeOwned {
    const NAME: &'static str;
    /// Checks ranges that the JSON types cannot express.
    fn validate(&self) -> Result<(), ConfigError> {
        Ok(())
    }
    /// Writes artifacts into `run` and returns the headline result.
    fn execute(&self, run: &mut Run) -> Result<Value>;
}

fn default_law() -> EnergyLaw {
    EnergyLaw::uniform_signed()
}

fn check(ok: bool, pointer: &str, message: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::new(pointer, message))
    }
}

fn positive(value: f64, pointer: &str) -> Result<(), ConfigError> {
    check(value.is_finite() && value > 0.0, pointer, "must be a positive finite number")
}

fn dimension(dim: usize) -> Result<(), ConfigError> {
    check((1..=3).contains(&dim), "/dim", "dimension must be 1, 2 or 3")
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    Ppp,
    Lattice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sample {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    /// Half side of the cubic window.
    pub half: f64,
    pub process: Process,
    pub spacing: f64,
    pub jitter: f64,
    pub seed: u64,
}

impl Default for Sample {
    fn default() -> Self {
        Self { dim: 2, rho: 1.0, law: default_law(), half: 8.0, process: Process::Ppp, spacing: 1.0, jitter: 0.25, seed: 1 }
    }
}

impl Command for Sample {
    const NAME: &'static str = "sample";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        check(self.rho >= 0.0, "/rho", "intensity must be non-negative")?;
        positive(self.half, "/half")?;
        positive(self.spacing, "/spacing")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let window = Window::centered_cube(self.dim, self.half)?;
        let seed = RngSeed::new(self.seed);
        let conf = match self.process {
            Process::Ppp => sample_marked_ppp(self.rho, &self.law, &window, seed)?,
            Process::Lattice => sample_perturbed_lattice(self.spacing, self.jitter, &self.law, &window, seed)?,
        };
        let mut header: Vec<String> = (1..=self.dim).map(|k| format!("x{k}")).collect();
        header.push("e".into());
        let rows: Vec<Vec<String>> =
            conf.iter().map(|p| p.position.iter().map(|&x| fmt(x)).chain([fmt(p.energy)]).collect()).collect();
        run.csv_records("points.csv", &header, &rows)?;
        run.json("configuration.json", &conf)?;
        Ok(json!({"points": conf.len(), "volume": window.volume()}))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Threshold,
    Boolean,
    Ma,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Graph {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub half: f64,
    pub kind: GraphKind,
    pub zeta: f64,
    pub beta: f64,
    pub radius: f64,
    /// Box side for `ma` networks; the window is the padded stripe.
    pub ell: f64,
    pub c_min: f64,
    pub seed: u64,
}

impl Default for Graph {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            half: 8.0,
            kind: GraphKind::Threshold,
            zeta: 1.0,
            beta: 1.0,
            radius: 0.5,
            ell: 8.0,
            c_min: 1e-6,
            seed: 1,
        }
    }
}

#[derive(Serialize)]
struct EdgeRow {
    i: usize,
    j: usize,
    weight: f64,
}

impl Command for Graph {
    const NAME: &'static str = "graph";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        positive(self.rho, "/rho")?;
        positive(self.half, "/half")?;
        positive(self.zeta, "/zeta")?;
        positive(self.beta, "/beta")?;
        positive(self.radius, "/radius")?;
        positive(self.ell, "/ell")?;
        check(self.c_min > 0.0 && self.c_min < 1.0, "/c_min", "must lie in (0, 1)")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let seed = RngSeed::new(self.seed);
        let graph = match self.kind {
            GraphKind::Threshold | GraphKind::Boolean => {
                let window = Window::centered_cube(self.dim, self.half)?;
                let conf = sample_marked_ppp(self.rho, &self.law, &window, seed)?;
                if self.kind == GraphKind::Threshold {
                    build_threshold_graph(&conf, self.zeta, self.beta)?
                } else {
                    build_boolean_graph(&conf, self.radius)?
                }
            }
            GraphKind::Ma => {
                let geometry = StripeGeometry::new(self.dim, self.ell)?;
                let conf = sample_marked_ppp(self.rho, &self.law, &geometry.padded_window(-self.c_min.ln()), seed)?;
                build_ma_network(&conf, self.beta, &geometry, self.c_min)?
            }
        };
        run.csv("edges.csv", graph.edges().iter().map(|e| EdgeRow { i: e.i, j: e.j, weight: e.weight }))?;
        let labels = clusters(&graph);
        let summary = json!({
            "vertices": graph.vertex_count(),
            "edges": graph.edge_count(),
            "clusters": labels.count(),
            "largest_cluster": labels.sizes().into_iter().max().unwrap_or(0),
            "meta": graph.meta(),
        });
        run.json("graph.json", &summary)?;
        Ok(summary)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Percolate {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub zeta: f64,
    pub beta: f64,
    #[serde(rename = "L")]
    pub box_side: f64,
    pub replicas: usize,
    /// Also run the rescaled `G[1,1]` formulation and compare.
    pub compare_rescaled: bool,
    pub seed: u64,
}

impl Default for Percolate {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            zeta: 3.8,
            beta: 4.0,
            box_side: 16.0,
            replicas: 200,
            compare_rescaled: false,
            seed: 1,
        }
    }
}

impl Percolate {
    fn model(&self) -> ThresholdModel {
        ThresholdModel { dim: self.dim, rho: self.rho, law: self.law.clone(), zeta: self.zeta, beta: self.beta }
    }
}

impl Command for Percolate {
    const NAME: &'static str = "percolate";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        positive(self.rho, "/rho")?;
        positive(self.zeta, "/zeta")?;
        positive(self.beta, "/beta")?;
        positive(self.box_side, "/L")?;
        check(self.replicas > 0, "/replicas", "need at least one replica")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let seed = RngSeed::new(self.seed);
        let model = self.model();
        let direct = percolation::crossing_probability(&model, self.box_side, self.replicas, seed.child(0))?;
        let mut out = json!({"model": model, "L": self.box_side, "direct": direct});
        if self.compare_rescaled {
            let rescaled = model.rescaled()?;
            let other =
                percolation::crossing_probability(&rescaled, self.box_side / self.zeta, self.replicas, seed.child(1))?;
            let z = two_proportion_z_test(direct.hits, direct.replicas, other.hits, other.replicas)?;
            out["rescaled_model"] = json!(rescaled);
            out["rescaled"] = json!(other);
            out["z_test"] = json!(z);
        }
        run.json("crossing.json", &out)?;
        Ok(out)
    }
}

fn search_checks(dim: usize, box_side: f64, replicas: usize, tol: f64, lo: f64, hi: f64) -> Result<(), ConfigError> {
    dimension(dim)?;
    positive(box_side, "/L")?;
    positive(tol, "/tol")?;
    check(replicas > 0, "/replicas", "need at least one replica")?;
    check(lo >= 0.0 && hi > lo, "/hi", "need 0 <= lo < hi")
}

fn write_estimate(run: &mut Run, estimate: &percolation::ThresholdEstimate, extra: Value) -> Result<Value> {
    run.csv("probes.csv", estimate.probe_history.iter())?;
    let mut out = serde_json::to_value(estimate)?;
    if let (Value::Object(o), Value::Object(e)) = (&mut out, extra) {
        o.extend(e);
    }
    run.json("threshold.json", &out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdZeta {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub beta: f64,
    #[serde(rename = "L")]
    pub box_side: f64,
    pub replicas: usize,
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
}

impl Default for ThresholdZeta {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            beta: 4.0,
            box_side: 32.0,
            replicas: 200,
            tol: 0.02,
            lo: 0.5,
            hi: 8.0,
            seed: 1,
        }
    }
}

impl Command for ThresholdZeta {
    const NAME: &'static str = "threshold-zeta";

    fn validate(&self) -> Result<(), ConfigError> {
        search_checks(self.dim, self.box_side, self.replicas, self.tol, self.lo, self.hi)?;
        positive(self.rho, "/rho")?;
        positive(self.beta, "/beta")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let search = ThresholdSearch::new(self.dim, self.box_side, self.replicas, self.tol, self.lo, self.hi);
        let estimate = estimate_zeta_c(&search, self.beta, self.rho, &self.law, RngSeed::new(self.seed))?;
        write_estimate(run, &estimate, json!({"beta": self.beta}))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdLambda {
    pub dim: usize,
    pub alpha: f64,
    pub sign: SignMode,
    #[serde(rename = "L")]
    pub box_side: f64,
    pub replicas: usize,
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
}

impl Default for ThresholdLambda {
    fn default() -> Self {
        Self {
            dim: 2,
            alpha: 0.0,
            sign: SignMode::Signed,
            box_side: 32.0,
            replicas: 200,
            tol: 0.05,
            lo: 0.0,
            hi: 24.0,
            seed: 1,
        }
    }
}

impl Command for ThresholdLambda {
    const NAME: &'static str = "threshold-lambda";

    fn validate(&self) -> Result<(), ConfigError> {
        search_checks(self.dim, self.box_side, self.replicas, self.tol, self.lo, self.hi)?;
        check(self.alpha.is_finite() && self.alpha >= 0.0, "/alpha", "alpha must be non-negative")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let search = ThresholdSearch::new(self.dim, self.box_side, self.replicas, self.tol, self.lo, self.hi);
        let estimate = percolation::estimate_lambda_c(&search, self.alpha, self.sign, RngSeed::new(self.seed))?;
        write_estimate(run, &estimate, json!({"alpha": self.alpha, "sign": self.sign}))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Crossings {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub zeta: f64,
    pub beta: f64,
    #[serde(rename = "L")]
    pub box_sides: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
}

impl Default for Crossings {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            zeta: 1.0,
            beta: 1.0,
            box_sides: vec![8.0, 16.0, 24.0],
            replicas: 20,
            seed: 1,
        }
    }
}

impl Command for Crossings {
    const NAME: &'static str = "crossings";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        positive(self.rho, "/rho")?;
        positive(self.zeta, "/zeta")?;
        positive(self.beta, "/beta")?;
        check(!self.box_sides.is_empty(), "/L", "need at least one box side")?;
        for (k, &l) in self.box_sides.iter().enumerate() {
            positive(l, &format!("/L/{k}"))?;
        }
        check(self.replicas > 0, "/replicas", "need at least one replica")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let model = ThresholdModel { dim: self.dim, rho: self.rho, law: self.law.clone(), zeta: self.zeta, beta: self.beta };
        let rows = crossing_density_scan(&model, &self.box_sides, self.replicas, RngSeed::new(self.seed))?;
        run.csv("density.csv", rows.iter())?;
        Ok(json!({"rows": rows}))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Conductivity {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub beta: f64,
    pub ell: f64,
    pub replicas: usize,
    /// Sampling margin beyond `±ℓ/2` along the first axis.
    pub pad: f64,
    pub tol: f64,
    pub cutoff: Cutoff,
    pub seed: u64,
}

impl Default for Conductivity {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            beta: 2.0,
            ell: 16.0,
            replicas: 8,
            pad: 16.0,
            tol: 1e-10,
            cutoff: Cutoff::default(),
            seed: 1,
        }
    }
}

#[derive(Serialize)]
struct ConductivityRow {
    replica: usize,
    status: &'static str,
    sigma: f64,
    rescaled: f64,
    zeta_cut: f64,
    dropped: f64,
    cutoff_converged: bool,
    box_nodes: usize,
    filaments: usize,
    iterations: usize,
}

impl Command for Conductivity {
    const NAME: &'static str = "conductivity";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        positive(self.rho, "/rho")?;
        positive(self.beta, "/beta")?;
        positive(self.ell, "/ell")?;
        positive(self.pad, "/pad")?;
        positive(self.tol, "/tol")?;
        check(self.replicas > 0, "/replicas", "need at least one replica")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let geometry = StripeGeometry::new(self.dim, self.ell)?;
        let options = ConductivityOptions { tol: self.tol, cutoff: self.cutoff };
        let seed = RngSeed::new(self.seed);
        let rows: Vec<ConductivityRow> = (0..self.replicas)
            .into_par_iter()
            .map(|r| -> Result<ConductivityRow> {
                let conf = sample_marked_ppp(self.rho, &self.law, &geometry.padded_window(self.pad), seed.child(r as u64))?;
                Ok(match rescaled_conductivity(&conf, self.beta, &geometry, &options) {
                    Ok(rep) => ConductivityRow {
                        replica: r,
                        status: "ok",
                        sigma: rep.sigma,
                        rescaled: rep.rescaled,
                        zeta_cut: rep.zeta_cut,
                        dropped: rep.dropped,
                        cutoff_converged: rep.cutoff_converged,
                        box_nodes: rep.box_nodes,
                        filaments: rep.filaments,
                        iterations: rep.iterations,
                    },
                    Err(Error::EmptyRegion(_)) => ConductivityRow {
                        replica: r,
                        status: "empty_region",
                        sigma: 0.0,
                        rescaled: 0.0,
                        zeta_cut: 0.0,
                        dropped: 0.0,
                        cutoff_converged: true,
                        box_nodes: 0,
                        filaments: 0,
                        iterations: 0,
                    },
                    Err(e) => return Err(e).with_context(|| format!("replica {r}")),
                })
            })
            .collect::<Result<_>>()?;
        run.csv("replicas.csv", rows.iter())?;
        let values: Vec<f64> = rows.iter().filter(|r| r.status == "ok").map(|r| r.rescaled).collect();
        let logs: Vec<f64> = values.iter().filter(|v| **v > 0.0).map(|v| v.ln()).collect();
        let (mean, stderr) = mean_stderr(&values);
        let (mean_ln, stderr_ln) = mean_stderr(&logs);
        let summary = json!({
            "ell": self.ell,
            "beta": self.beta,
            "replicas": self.replicas,
            "usable": values.len(),
            "mean_rescaled_sigma": mean,
            "stderr": stderr,
            "mean_ln_sigma": mean_ln,
            "stderr_ln": stderr_ln,
            "unconverged_cutoffs": rows.iter().filter(|r| !r.cutoff_converged).count(),
        });
        run.json("summary.json", &summary)?;
        Ok(summary)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MottScanCommand {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub betas: Vec<f64>,
    /// Critical intensity of the limiting law; estimated when absent.
    pub lambda_star: Option<f64>,
    #[serde(rename = "lambda_L")]
    pub lambda_box_side: f64,
    pub lambda_replicas: usize,
    pub l_factor: f64,
    pub replicas: usize,
    pub tol: f64,
    pub cutoff: Cutoff,
    pub seed: u64,
}

impl Default for MottScanCommand {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            betas: vec![2.0, 4.0, 8.0, 16.0],
            lambda_star: None,
            lambda_box_side: 32.0,
            lambda_replicas: 200,
            l_factor: 8.0,
            replicas: 8,
            tol: 1e-8,
            cutoff: Cutoff::Adaptive { rel_tol: 1e-2, start: 6.0 },
            seed: 1,
        }
    }
}

impl Command for MottScanCommand {
    const NAME: &'static str = "mott-scan";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        positive(self.rho, "/rho")?;
        check(self.law.power_class().is_some(), "/law", "mott scan needs a power law")?;
        check(self.betas.len() >= 2, "/betas", "need at least two inverse temperatures")?;
        check(self.betas.windows(2).all(|w| w[1] > w[0]), "/betas", "inverse temperatures must increase")?;
        if let Some(l) = self.lambda_star {
            positive(l, "/lambda_star")?;
        }
        positive(self.lambda_box_side, "/lambda_L")?;
        positive(self.l_factor, "/l_factor")?;
        check(self.replicas > 0, "/replicas", "need at least one replica")?;
        check(self.lambda_replicas > 0, "/lambda_replicas", "need at least one replica")
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let seed = RngSeed::new(self.seed);
        let class = self.law.power_class().context("mott scan needs a power law")?;
        let (lambda_star, estimate) = match self.lambda_star {
            Some(l) => (l, None),
            None => {
                let search = ThresholdSearch::new(self.dim, self.lambda_box_side, self.lambda_replicas, 0.05, 0.0, 24.0);
                let e = percolation::estimate_lambda_c(&search, class.alpha, class.sign, seed.child(0))?;
                (e.value, Some(e))
            }
        };
        let plan = MottPlan {
            dim: self.dim,
            rho: self.rho,
            law: self.law.clone(),
            betas: self.betas.clone(),
            lambda_star,
            l_factor: self.l_factor,
            replicas: self.replicas,
            seed: seed.child(1),
            options: ConductivityOptions { tol: self.tol, cutoff: self.cutoff },
        };
        let scan = mott_scan(&plan)?;
        run.csv("scan.csv", scan.rows.iter())?;
        let predictions: Vec<Value> = self
            .betas
            .iter()
            .map(|&b| predicted_zeta_c(lambda_star, self.rho, class.c0, class.alpha, self.dim, b).map(|p| json!(p)))
            .collect::<hopnet::Result<_>>()?;
        let slope = json!({
            "slope": scan.fit.slope,
            "slope_stderr": scan.fit.slope_stderr,
            "intercept": scan.fit.intercept,
            "slope_interval_95": scan.slope_interval,
            "reference_slope": scan.reference_slope,
            "lambda_star": lambda_star,
            "lambda_estimate": estimate,
            "zeta_c_predictions": predictions,
        });
        run.json("slope.json", &slope)?;
        Ok(slope)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Walk {
    pub dim: usize,
    pub rho: f64,
    pub law: EnergyLaw,
    pub beta: f64,
    pub window_radius: f64,
    pub t_max: f64,
    pub c_min: f64,
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for Walk {
    fn default() -> Self {
        Self {
            dim: 2,
            rho: 1.0,
            law: default_law(),
            beta: 2.0,
            window_radius: 40.0,
            t_max: 200.0,
            c_min: 4.5e-5,
            trajectories: 100,
            seed: 1,
        }
    }
}

impl Command for Walk {
    const NAME: &'static str = "walk";

    fn validate(&self) -> Result<(), ConfigError> {
        dimension(self.dim)?;
        positive(self.rho, "/rho")?;
        positive(self.beta, "/beta")?;
        positive(self.window_radius, "/window_radius")?;
        positive(self.t_max, "/t_max")?;
        check(self.c_min > 0.0 && self.c_min < 1.0, "/c_min", "must lie in (0, 1)")?;
        check(
            self.trajectories >= walk::MIN_TRAJECTORIES,
            "/trajectories",
            &format!("need at least {} trajectories", walk::MIN_TRAJECTORIES),
        )
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let trajectories = walk::palm_walks(
            self.dim,
            self.rho,
            &self.law,
            self.beta,
            self.window_radius,
            self.t_max,
            self.c_min,
            self.trajectories,
            RngSeed::new(self.seed),
        )?;
        let mut header = vec!["trajectory".to_string(), "jumps".into(), "absorbed".into(), "boundary_exposure".into()];
        header.extend((1..=self.dim).map(|k| format!("dx{k}")));
        let rows: Vec<Vec<String>> = trajectories
            .iter()
            .enumerate()
            .map(|(k, t)| {
                [k.to_string(), (t.states.len() - 1).to_string(), t.absorbed.to_string(), fmt(t.boundary_exposure)]
                    .into_iter()
                    .chain(t.displacement.iter().map(|&x| fmt(x)))
                    .collect()
            })
            .collect();
        run.csv_records("trajectories.csv", &header, &rows)?;
        let d = estimate_diffusion(&trajectories, self.dim)?;
        let out = json!({"diffusion": d, "rho_times_d": d.d_axis.iter().map(|x| self.rho * x).collect::<Vec<_>>()});
        run.json("diffusion.json", &out)?;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FkgDemo {
    pub samples: usize,
    pub seed: u64,
}

impl Default for FkgDemo {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 1 }
    }
}

impl Command for FkgDemo {
    const NAME: &'static str = "fkg-demo";

    fn validate(&self) -> Result<(), ConfigError> {
        check(
            self.samples >= fkg::MIN_SAMPLES,
            "/samples",
            &format!("need at least {} samples", fkg::MIN_SAMPLES),
        )
    }

    fn execute(&self, run: &mut Run) -> Result<Value> {
        let summary = fkg_probabilities(self.samples, RngSeed::new(self.seed))?;
        let mut out = serde_json::to_value(&summary)?;
        out["PB_exact"] = json!(1.0 / 16.0);
        run.json("fkg.json", &out)?;
        Ok(out)
    }
}
