//! `hopnet`: reproducible experiment runner.
//!
//! Exit codes: 0 success, 2 config error, 3 runtime error.

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use commands::*;
use config::ConfigError;
use hopnet::{Cutoff, EnergyLaw, SignMode};
use output::Run;

#[derive(Parser)]
#[command(name = "hopnet", version, about = "Miller-Abrahams networks and Mott's random walk experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON config; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root for run directories.
    #[arg(long, global = true, default_value = "runs")]
    out: PathBuf,
    /// Write into exactly this directory instead of `<out>/<timestamp>-<hash>`.
    #[arg(long, global = true)]
    run_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Positive,
    Signed,
}

impl From<SignArg> for SignMode {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Positive => SignMode::Positive,
            SignArg::Signed => SignMode::Signed,
        }
    }
}

/// Power-law energy marks.
#[derive(Args, Clone, Default)]
struct LawFlags {
    #[arg(long)]
    sign: Option<SignArg>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
}

impl LawFlags {
    fn apply(&self, law: &mut EnergyLaw) -> Result<(), ConfigError> {
        if self.sign.is_none() && self.c0.is_none() && self.alpha.is_none() {
            return Ok(());
        }
        let (sign, c0, alpha) = match law.power_class() {
            Some(c) if !matches!(law, EnergyLaw::GeneralTable(_)) => (c.sign, c.c0, c.alpha),
            _ => (SignMode::Signed, 1.0, 0.0),
        };
        *law = EnergyLaw::power(
            self.sign.map(Into::into).unwrap_or(sign),
            self.c0.unwrap_or(c0),
            self.alpha.unwrap_or(alpha),
        )
        .map_err(|e| ConfigError::new("/law", e.to_string()))?;
        Ok(())
    }
}

#[derive(Args, Clone, Default)]
struct CutoffFlags {
    /// Fixed cutoff `ζ_cut` (filaments with `c < e^{-ζ_cut}` are dropped).
    #[arg(long)]
    zeta_cut: Option<f64>,
    /// Relative truncation tolerance of the adaptive cutoff.
    #[arg(long)]
    rel_tol: Option<f64>,
}

impl CutoffFlags {
    fn apply(&self, cutoff: &mut Cutoff) -> Result<(), ConfigError> {
        match (self.zeta_cut, self.rel_tol) {
            (Some(_), Some(_)) => Err(ConfigError::new("/cutoff", "--zeta-cut and --rel-tol are exclusive")),
            (Some(z), None) if z > 0.0 => {
                *cutoff = Cutoff::Fixed { zeta_cut: z };
                Ok(())
            }
            (Some(_), None) => Err(ConfigError::new("/cutoff/zeta_cut", "must be positive")),
            (None, Some(r)) if r > 0.0 => {
                let start = match *cutoff {
                    Cutoff::Adaptive { start, .. } => start,
                    Cutoff::Fixed { zeta_cut } => zeta_cut,
                };
                *cutoff = Cutoff::Adaptive { rel_tol: r, start };
                Ok(())
            }
            (None, Some(_)) => Err(ConfigError::new("/cutoff/rel_tol", "must be positive")),
            (None, None) => Ok(()),
        }
    }
}

#[derive(Args, Clone)]
struct SampleArgs {
    #[command(flatten)]
    law: LawFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    half: Option<f64>,
    #[arg(long, value_parser = ["ppp", "lattice"])]
    process: Option<String>,
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long)]
    jitter: Option<f64>,
}

#[derive(Args, Clone)]
struct GraphArgs {
    #[command(flatten)]
    law: LawFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    half: Option<f64>,
    #[arg(long, value_parser = ["threshold", "boolean", "ma"])]
    kind: Option<String>,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    c_min: Option<f64>,
}

#[derive(Args, Clone)]
struct PercolateArgs {
    #[command(flatten)]
    law: LawFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "L")]
    box_side: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    compare_rescaled: bool,
}

#[derive(Args, Clone)]
struct SearchFlags {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long = "L")]
    box_side: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
}

#[derive(Args, Clone)]
struct ThresholdZetaArgs {
    #[command(flatten)]
    law: LawFlags,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args, Clone)]
struct ThresholdLambdaArgs {
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    sign: Option<SignArg>,
}

#[derive(Args, Clone)]
struct CrossingsArgs {
    #[command(flatten)]
    law: LawFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated box sides.
    #[arg(long = "L", value_delimiter = ',')]
    box_sides: Option<Vec<f64>>,
    #[arg(long)]
    replicas: Option<usize>,
}

#[derive(Args, Clone)]
struct ConductivityArgs {
    #[command(flatten)]
    law: LawFlags,
    #[command(flatten)]
    cutoff: CutoffFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    pad: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct MottScanArgs {
    #[command(flatten)]
    law: LawFlags,
    #[command(flatten)]
    cutoff: CutoffFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    /// Comma-separated inverse temperatures.
    #[arg(long = "beta", value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    #[arg(long)]
    lambda_star: Option<f64>,
    #[arg(long)]
    l_factor: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct WalkArgs {
    #[command(flatten)]
    law: LawFlags,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    window_radius: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    c_min: Option<f64>,
    #[arg(long)]
    trajectories: Option<usize>,
}

#[derive(Args, Clone)]
struct FkgArgs {
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a marked point configuration.
    Sample(SampleArgs),
    /// Build a threshold, Boolean or Miller-Abrahams graph.
    Graph(GraphArgs),
    /// Estimate a left-right crossing probability.
    Percolate(PercolateArgs),
    /// Bisection estimate of the critical threshold in zeta.
    ThresholdZeta(ThresholdZetaArgs),
    /// Bisection estimate of the critical intensity of G[1,1].
    ThresholdLambda(ThresholdLambdaArgs),
    /// Vertex-disjoint crossing density across box sides.
    Crossings(CrossingsArgs),
    /// Conductivity of finite Miller-Abrahams networks.
    Conductivity(ConductivityArgs),
    /// Conductivity across inverse temperatures with the log-slope fit.
    MottScan(MottScanArgs),
    /// Mott's random walk from the Palm origin.
    Walk(WalkArgs),
    /// Monte-Carlo check of the three-site correlation counterexample.
    FkgDemo(FkgArgs),
    /// Rerun the config stored in a manifest.
    Replay {
        manifest: PathBuf,
    },
}

type Overrides = Vec<(&'static str, Value)>;

fn push<T: serde::Serialize>(out: &mut Overrides, pointer: &'static str, value: &Option<T>) {
    if let Some(v) = value {
        out.push((pointer, serde_json::to_value(v).expect("flag values serialize")));
    }
}

fn search_overrides(s: &SearchFlags, out: &mut Overrides) {
    push(out, "/dim", &s.dim);
    push(out, "/L", &s.box_side);
    push(out, "/replicas", &s.replicas);
    push(out, "/tol", &s.tol);
    push(out, "/lo", &s.lo);
    push(out, "/hi", &s.hi);
}

enum Failure {
    Config(ConfigError),
    Runtime(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

fn resolve<C: Command>(
    base: Map<String, Value>,
    overrides: &Overrides,
    seed: Option<u64>,
    patch: impl FnOnce(&mut C) -> Result<(), ConfigError>,
) -> Result<C, ConfigError> {
    let mut map = base;
    config::take_header(&mut map, C::NAME)?;
    for (pointer, value) in overrides {
        config::set_pointer(&mut map, pointer, value.clone());
    }
    if let Some(s) = seed {
        map.insert("seed".into(), Value::from(s));
    }
    let mut params: C = config::parse(map)?;
    patch(&mut params)?;
    params.validate()?;
    Ok(params)
}

fn execute<C: Command>(params: &C, common: &Common) -> Result<(), Failure> {
    let mut resolved = match serde_json::to_value(params).map_err(|e| Failure::Runtime(e.into()))? {
        Value::Object(m) => m,
        _ => unreachable!("parameters serialize to objects"),
    };
    resolved.insert("schema_version".into(), Value::from(config::SCHEMA_VERSION));
    resolved.insert("command".into(), Value::from(C::NAME));
    let resolved = Value::Object(resolved);
    let hash = output::sha256_hex(&serde_json::to_vec(&resolved).map_err(|e| Failure::Runtime(e.into()))?);
    let mut run = Run::create(&common.out, common.run_dir.as_deref(), &hash).map_err(Failure::Runtime)?;
    let headline = params.execute(&mut run).map_err(Failure::Runtime)?;
    let dir = run.finish(C::NAME, &resolved, &hash).map_err(Failure::Runtime)?;
    let report = serde_json::json!({"run_dir": dir, "result": headline});
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.into()))?);
    Ok(())
}

fn run_with<C: Command>(
    base: Map<String, Value>,
    overrides: &Overrides,
    common: &Common,
    patch: impl FnOnce(&mut C) -> Result<(), ConfigError>,
) -> Result<(), Failure> {
    let params = resolve::<C>(base, overrides, common.seed, patch)?;
    execute(&params, common)
}

fn no_patch<C>(_: &mut C) -> Result<(), ConfigError> {
    Ok(())
}

fn replay(manifest: &Path, common: &Common) -> Result<(), Failure> {
    let mut m = config::load(manifest)?;
    let command = match m.get("command") {
        Some(Value::String(c)) => c.clone(),
        _ => return Err(ConfigError::new("/command", "manifest has no command").into()),
    };
    let base = match m.remove("config") {
        Some(Value::Object(c)) => c,
        _ => return Err(ConfigError::new("/config", "manifest has no config object").into()),
    };
    let none = Vec::new();
    let common = Common { seed: None, ..common.clone() };
    match command.as_str() {
        Sample::NAME => run_with::<Sample>(base, &none, &common, no_patch),
        Graph::NAME => run_with::<Graph>(base, &none, &common, no_patch),
        Percolate::NAME => run_with::<Percolate>(base, &none, &common, no_patch),
        ThresholdZeta::NAME => run_with::<ThresholdZeta>(base, &none, &common, no_patch),
        ThresholdLambda::NAME => run_with::<ThresholdLambda>(base, &none, &common, no_patch),
        Crossings::NAME => run_with::<Crossings>(base, &none, &common, no_patch),
        Conductivity::NAME => run_with::<Conductivity>(base, &none, &common, no_patch),
        MottScanCommand::NAME => run_with::<MottScanCommand>(base, &none, &common, no_patch),
        Walk::NAME => run_with::<Walk>(base, &none, &common, no_patch),
        FkgDemo::NAME => run_with::<FkgDemo>(base, &none, &common, no_patch),
        other => Err(ConfigError::new("/command", format!("unknown command {other:?}")).into()),
    }
}

fn dispatch(cmd: Cmd, common: &Common) -> Result<(), Failure> {
    let base = match &common.config {
        Some(path) => config::load(path)?,
        None => Map::new(),
    };
    let mut o: Overrides = Vec::new();
    match cmd {
        Cmd::Sample(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/half", &a.half);
            push(&mut o, "/process", &a.process);
            push(&mut o, "/spacing", &a.spacing);
            push(&mut o, "/jitter", &a.jitter);
            run_with::<Sample>(base, &o, common, |p| a.law.apply(&mut p.law))
        }
        Cmd::Graph(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/half", &a.half);
            push(&mut o, "/kind", &a.kind);
            push(&mut o, "/zeta", &a.zeta);
            push(&mut o, "/beta", &a.beta);
            push(&mut o, "/radius", &a.radius);
            push(&mut o, "/ell", &a.ell);
            push(&mut o, "/c_min", &a.c_min);
            run_with::<Graph>(base, &o, common, |p| a.law.apply(&mut p.law))
        }
        Cmd::Percolate(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/zeta", &a.zeta);
            push(&mut o, "/beta", &a.beta);
            push(&mut o, "/L", &a.box_side);
            push(&mut o, "/replicas", &a.replicas);
            if a.compare_rescaled {
                o.push(("/compare_rescaled", Value::Bool(true)));
            }
            run_with::<Percolate>(base, &o, common, |p| a.law.apply(&mut p.law))
        }
        Cmd::ThresholdZeta(a) => {
            search_overrides(&a.search, &mut o);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/beta", &a.beta);
            run_with::<ThresholdZeta>(base, &o, common, |p| a.law.apply(&mut p.law))
        }
        Cmd::ThresholdLambda(a) => {
            search_overrides(&a.search, &mut o);
            push(&mut o, "/alpha", &a.alpha);
            push(&mut o, "/sign", &a.sign.map(SignMode::from));
            run_with::<ThresholdLambda>(base, &o, common, no_patch)
        }
        Cmd::Crossings(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/zeta", &a.zeta);
            push(&mut o, "/beta", &a.beta);
            push(&mut o, "/L", &a.box_sides);
            push(&mut o, "/replicas", &a.replicas);
            run_with::<Crossings>(base, &o, common, |p| a.law.apply(&mut p.law))
        }
        Cmd::Conductivity(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/beta", &a.beta);
            push(&mut o, "/ell", &a.ell);
            push(&mut o, "/replicas", &a.replicas);
            push(&mut o, "/pad", &a.pad);
            push(&mut o, "/tol", &a.tol);
            run_with::<Conductivity>(base, &o, common, |p| {
                a.law.apply(&mut p.law)?;
                a.cutoff.apply(&mut p.cutoff)
            })
        }
        Cmd::MottScan(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/betas", &a.betas);
            push(&mut o, "/lambda_star", &a.lambda_star);
            push(&mut o, "/l_factor", &a.l_factor);
            push(&mut o, "/replicas", &a.replicas);
            push(&mut o, "/tol", &a.tol);
            run_with::<MottScanCommand>(base, &o, common, |p| {
                a.law.apply(&mut p.law)?;
                a.cutoff.apply(&mut p.cutoff)
            })
        }
        Cmd::Walk(a) => {
            push(&mut o, "/dim", &a.dim);
            push(&mut o, "/rho", &a.rho);
            push(&mut o, "/beta", &a.beta);
            push(&mut o, "/window_radius", &a.window_radius);
            push(&mut o, "/t_max", &a.t_max);
            push(&mut o, "/c_min", &a.c_min);
            push(&mut o, "/trajectories", &a.trajectories);
            run_with::<Walk>(base, &o, common, |p| a.law.apply(&mut p.law))
        }
        Cmd::FkgDemo(a) => {
            push(&mut o, "/samples", &a.samples);
            run_with::<FkgDemo>(base, &o, common, no_patch)
        }
        Cmd::Replay { manifest } => replay(&manifest, common),
    }
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("HOPNET_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError::new("", format!("HOPNET_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError::new("", format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().map_err(Failure::from).and_then(|_| dispatch(cli.command, &cli.common));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
