//! Command-line front end: flag/config-file resolution, CSV emission and
//! exit-code mapping for the seven subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::analytic::RayleighOutage;
use crate::bounds::{
    q_bc_dominant_void_bound, tightness_diagnostic, DominantMarkBound,
};
use crate::config::{FadingSpec, Method, NetworkConfig};
use crate::diversity::{default_analytic_grid, default_mc_grid, estimate_scdo, log_grid};
use crate::error::{Error, Result};
use crate::geometry::{dominant_regions, NodeLayout, Point};
use crate::montecarlo::{estimate_outage, SimulationParams};
use crate::optimizer::sweep_alpha_curve;
use crate::quad::QuadratureSettings;

#[derive(Parser, Debug)]
#[command(
    name = "sdf-outage",
    about = "Outage probability of selection decode-and-forward relaying in Poisson interference",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-phase outage from the Rayleigh-fading formulas.
    Analytic(CommonOpts),
    /// Monte Carlo outage estimates with standard errors.
    Simulate(CommonOpts),
    /// Diversity-order slope fit of an outage curve.
    Scdo(ScdoOpts),
    /// Dominant-interferer ball radii, areas and overlap.
    Regions(CommonOpts),
    /// Optimal relay position on the source-destination line.
    Optimize(OptimizeOpts),
    /// Dominant-interferer lower bound on broadcast-phase outage.
    Bound(CommonOpts),
    /// Lower bound against Monte Carlo across a density grid.
    Tightness(CommonOpts),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FadingArg {
    /// Rayleigh fading on every link.
    Rayleigh,
    /// All gains pinned at 1.
    PathlossOnly,
    /// Non-fading desired links, Rayleigh interference marks.
    MixedU1,
}

impl FadingArg {
    fn spec(self) -> FadingSpec {
        match self {
            FadingArg::Rayleigh => FadingSpec::rayleigh(),
            FadingArg::PathlossOnly => FadingSpec::path_loss_only(),
            FadingArg::MixedU1 => FadingSpec::mixed_u1(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            FadingArg::Rayleigh => "rayleigh",
            FadingArg::PathlossOnly => "pathloss-only",
            FadingArg::MixedU1 => "mixed-u1",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceArg {
    Analytic,
    Bound,
    Montecarlo,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonOpts {
    /// Path-loss exponent (default 4).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// SIR threshold (default 0.1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Interferer density (default 1e-3).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Log-spaced density grid, e.g. 1e-6:1e-4:8log.
    #[arg(long, value_name = "LO:HI:Nlog")]
    pub lambda_grid: Option<String>,
    /// Source position, e.g. 15,0.
    #[arg(long, value_name = "X,Y")]
    pub xs: Option<String>,
    /// Relay position, e.g. 6,0.
    #[arg(long, value_name = "X,Y")]
    pub xr: Option<String>,
    /// Fading model (default rayleigh).
    #[arg(long, value_enum)]
    pub fading: Option<FadingArg>,
    /// Monte Carlo trials (default 100000).
    #[arg(long)]
    pub trials: Option<u64>,
    /// RNG seed (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulation disk radius (default: truncation analysis).
    #[arg(long)]
    pub window_radius: Option<f64>,
    /// Antithetic trial pairing.
    #[arg(long)]
    pub antithetic: bool,
    /// Worker threads (default: all cores; never changes emitted numbers).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file mirroring the flags; flags override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ScdoOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Curve to fit (default analytic).
    #[arg(long, value_enum)]
    pub source: Option<SourceArg>,
}

#[derive(Args, Debug, Clone)]
pub struct OptimizeOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Linear alpha sweep, e.g. 2.5:6:15.
    #[arg(long, value_name = "LO:HI:N")]
    pub alpha_grid: Option<String>,
}

/// JSON mirror of the flags; any subset may be present.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    beta: Option<f64>,
    lambda: Option<f64>,
    lambda_grid: Option<String>,
    xs: Option<String>,
    xr: Option<String>,
    fading: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    window_radius: Option<f64>,
    antithetic: Option<bool>,
    threads: Option<usize>,
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidConfig(format!(
            "expected a point as x,y - got {s:?}"
        )));
    }
    let x = parts[0].trim().parse::<f64>();
    let y = parts[1].trim().parse::<f64>();
    match (x, y) {
        (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => Ok(Point::new(x, y)),
        _ => Err(Error::InvalidConfig(format!(
            "expected a point as x,y - got {s:?}"
        ))),
    }
}

fn parse_log_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidConfig(format!("expected a grid as lo:hi:Nlog - got {s:?}"));
    let body = s.strip_suffix("log").ok_or_else(bad)?;
    let parts: Vec<&str> = body.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].parse::<f64>().map_err(|_| bad())?;
    let n = parts[2].parse::<usize>().map_err(|_| bad())?;
    log_grid(lo, hi, n)
}

fn parse_linear_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidConfig(format!("expected a sweep as lo:hi:N - got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].parse::<f64>().map_err(|_| bad())?;
    let n = parts[2].parse::<usize>().map_err(|_| bad())?;
    if n == 0 || !lo.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if !(hi > lo) {
        return Err(bad());
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

fn parse_fading_name(s: &str) -> Result<FadingArg> {
    match s {
        "rayleigh" => Ok(FadingArg::Rayleigh),
        "pathloss-only" => Ok(FadingArg::PathlossOnly),
        "mixed-u1" => Ok(FadingArg::MixedU1),
        other => Err(Error::InvalidConfig(format!(
            "unknown fading model {other:?} (expected rayleigh, pathloss-only or mixed-u1)"
        ))),
    }
}

/// Fully resolved options after merging flags over the config file over the
/// defaults.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub lambda_grid: Option<Vec<f64>>,
    pub lambda_grid_text: Option<String>,
    pub xs: Option<Point>,
    pub xr: Option<Point>,
    pub fading: FadingArg,
    pub trials: u64,
    pub seed: u64,
    pub window_radius: Option<f64>,
    pub antithetic: bool,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Resolved {
    fn from_opts(opts: &CommonOpts) -> Result<Self> {
        let file: FileConfig = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text).map_err(|e| {
                    Error::InvalidConfig(format!("config file {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let fading = match opts.fading {
            Some(f) => f,
            None => match &file.fading {
                Some(name) => parse_fading_name(name)?,
                None => FadingArg::Rayleigh,
            },
        };
        let grid_text = opts.lambda_grid.clone().or(file.lambda_grid);
        let lambda_grid = grid_text.as_deref().map(parse_log_grid).transpose()?;
        let xs = opts
            .xs
            .clone()
            .or(file.xs)
            .as_deref()
            .map(parse_point)
            .transpose()?;
        let xr = opts
            .xr
            .clone()
            .or(file.xr)
            .as_deref()
            .map(parse_point)
            .transpose()?;
        Ok(Resolved {
            alpha: opts.alpha.or(file.alpha).unwrap_or(4.0),
            beta: opts.beta.or(file.beta).unwrap_or(0.1),
            lambda: opts.lambda.or(file.lambda).unwrap_or(1e-3),
            lambda_grid,
            lambda_grid_text: grid_text,
            xs,
            xr,
            fading,
            trials: opts.trials.or(file.trials).unwrap_or(100_000),
            seed: opts.seed.or(file.seed).unwrap_or(42),
            window_radius: opts.window_radius.or(file.window_radius),
            antithetic: opts.antithetic || file.antithetic.unwrap_or(false),
            threads: opts.threads.or(file.threads),
            out: opts.out.clone().or(file.out),
        })
    }

    fn layout(&self) -> Result<NodeLayout> {
        let xs = self
            .xs
            .ok_or_else(|| Error::InvalidConfig("--xs is required".into()))?;
        let xr = self
            .xr
            .ok_or_else(|| Error::InvalidConfig("--xr is required".into()))?;
        NodeLayout::new(xs, xr)
    }

    fn network_config(&self, lambda: f64) -> Result<NetworkConfig> {
        NetworkConfig::new(self.layout()?, self.alpha, self.beta, lambda, self.fading.spec())
    }

    fn sim_params(&self) -> SimulationParams {
        SimulationParams {
            window_radius: self.window_radius,
            trials: self.trials,
            seed: self.seed,
            antithetic: self.antithetic,
        }
    }

    fn lambdas(&self) -> Vec<f64> {
        match &self.lambda_grid {
            Some(grid) => grid.clone(),
            None => vec![self.lambda],
        }
    }

    /// `#`-prefixed line recording the resolved configuration. Thread count
    /// is deliberately absent: output must be identical for any --threads.
    fn comment(&self, command: &str) -> String {
        let mut parts = vec![
            format!("command={command}"),
            format!("alpha={}", self.alpha),
            format!("beta={}", self.beta),
            format!("fading={}", self.fading.name()),
        ];
        match &self.lambda_grid_text {
            Some(g) => parts.push(format!("lambda_grid={g}")),
            None => parts.push(format!("lambda={}", self.lambda)),
        }
        if let Some(p) = self.xs {
            parts.push(format!("xs={},{}", p.x, p.y));
        }
        if let Some(p) = self.xr {
            parts.push(format!("xr={},{}", p.x, p.y));
        }
        parts.push(format!("trials={}", self.trials));
        parts.push(format!("seed={}", self.seed));
        if let Some(r) = self.window_radius {
            parts.push(format!("window_radius={r}"));
        }
        if self.antithetic {
            parts.push("antithetic=true".into());
        }
        format!("# {}", parts.join(" "))
    }

    fn emit(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, content)?;
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn install_thread_pool(threads: Option<usize>) {
    if let Some(n) = threads {
        // best effort: a pool may already exist in-process (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn cmd_analytic(resolved: &Resolved) -> Result<String> {
    let layout = resolved.layout()?;
    if !resolved.fading.spec().is_all_rayleigh() {
        return Err(Error::InvalidConfig(
            "the analytic command requires --fading rayleigh".into(),
        ));
    }
    let settings = QuadratureSettings::default();
    let formulas = RayleighOutage::new(&layout, resolved.alpha, resolved.beta, &settings)?;
    let mut out = String::new();
    out.push_str(&resolved.comment("analytic"));
    out.push_str("\nlambda,q_bc,q_mac,q\n");
    for lambda in resolved.lambdas() {
        resolved.network_config(lambda)?;
        let b = formulas.breakdown(lambda);
        out.push_str(&format!("{},{},{},{}\n", lambda, b.q_bc, b.q_mac, b.q));
    }
    Ok(out)
}

fn cmd_simulate(resolved: &Resolved) -> Result<String> {
    let mut out = String::new();
    out.push_str(&resolved.comment("simulate"));
    out.push_str("\nlambda,q_bc_hat,se_bc,q_mac_hat,se_mac,trials,seed\n");
    let params = resolved.sim_params();
    for lambda in resolved.lambdas() {
        let config = resolved.network_config(lambda)?;
        let r = estimate_outage(&config, &params)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            lambda, r.bc.p_hat, r.bc.se, r.mac.p_hat, r.mac.se, r.bc.trials, r.bc.seed
        ));
    }
    Ok(out)
}

fn cmd_scdo(resolved: &Resolved, source: SourceArg) -> Result<String> {
    let grid = match &resolved.lambda_grid {
        Some(g) => g.clone(),
        None => match source {
            SourceArg::Montecarlo => default_mc_grid(),
            _ => default_analytic_grid(),
        },
    };
    let fit = match source {
        SourceArg::Analytic => {
            let layout = resolved.layout()?;
            if !resolved.fading.spec().is_all_rayleigh() {
                return Err(Error::InvalidConfig(
                    "the analytic slope source requires --fading rayleigh".into(),
                ));
            }
            let formulas = RayleighOutage::new(
                &layout,
                resolved.alpha,
                resolved.beta,
                &QuadratureSettings::default(),
            )?;
            estimate_scdo(
                |l| Ok(formulas.q_bc(l) + formulas.q_mac(l)),
                &grid,
                Method::Analytic,
            )?
        }
        SourceArg::Bound => {
            let bound = resolved_bound(resolved)?;
            estimate_scdo(|l| Ok(bound(l)), &grid, Method::Bound)?
        }
        SourceArg::Montecarlo => {
            let params = resolved.sim_params();
            estimate_scdo(
                |l| {
                    let config = resolved.network_config(l)?;
                    Ok(estimate_outage(&config, &params)?.breakdown.q)
                },
                &grid,
                Method::MonteCarlo,
            )?
        }
    };
    let mut out = String::new();
    out.push_str(&resolved.comment("scdo"));
    out.push_str("\ndelta_hat,residual,source\n");
    out.push_str(&format!("{},{},{}\n", fit.delta_hat, fit.residual, fit.source));
    Ok(out)
}

/// Broadcast-phase lower bound as a function of density, chosen by the
/// fading model: joint void probability of the dominant balls for
/// path-loss-only, the mark-tail exponent for mixed-u1.
fn resolved_bound(resolved: &Resolved) -> Result<Box<dyn Fn(f64) -> f64>> {
    let config = resolved.network_config(resolved.lambda)?;
    match resolved.fading {
        FadingArg::PathlossOnly => {
            let regions = dominant_regions(&config.layout, config.alpha, config.beta)?;
            Ok(Box::new(move |l| q_bc_dominant_void_bound(&regions, l)))
        }
        FadingArg::MixedU1 => {
            let bound = DominantMarkBound::new(&config, &QuadratureSettings::default())?;
            Ok(Box::new(move |l| bound.bound(l)))
        }
        FadingArg::Rayleigh => Err(Error::InvalidConfig(
            "lower bounds are defined for --fading pathloss-only or mixed-u1".into(),
        )),
    }
}

fn cmd_regions(resolved: &Resolved) -> Result<String> {
    let layout = resolved.layout()?;
    let regions = dominant_regions(&layout, resolved.alpha, resolved.beta)?;
    let mut out = String::new();
    out.push_str(&resolved.comment("regions"));
    out.push_str("\nr1,r2,area_r,area_d,area_lens,lens_fraction_of_union,overlap\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        regions.r1,
        regions.r2,
        regions.area_r,
        regions.area_d,
        regions.area_lens,
        regions.lens_fraction_of_union(),
        regions.overlap
    ));
    Ok(out)
}

fn cmd_optimize(resolved: &Resolved, alpha_grid: &Option<String>) -> Result<String> {
    let xs = resolved
        .xs
        .ok_or_else(|| Error::InvalidConfig("--xs is required".into()))?;
    let distance = xs.norm();
    let alphas = match alpha_grid {
        Some(s) => parse_linear_grid(s)?,
        None => vec![resolved.alpha],
    };
    for &alpha in &alphas {
        if !(alpha > 2.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be > 2, got {alpha}"
            )));
        }
    }
    if !resolved.fading.spec().is_all_rayleigh() {
        return Err(Error::InvalidConfig(
            "the optimizer minimizes the Rayleigh-fading outage; use --fading rayleigh".into(),
        ));
    }
    let settings = QuadratureSettings::with_rel_tol(1e-6);
    let mut out = String::new();
    out.push_str(&resolved.comment("optimize"));
    out.push_str("\nalpha,optimal_ratio,optimal_q\n");
    let rows = sweep_alpha_curve(&alphas, resolved.beta, resolved.lambda, distance, &settings);
    let mut first_error = None;
    for (alpha, row) in rows {
        match row {
            Ok(r) => out.push_str(&format!("{},{},{}\n", alpha, r.optimal_ratio, r.optimal_q)),
            Err(e) => {
                eprintln!("alpha {alpha}: {e}");
                first_error.get_or_insert(e);
            }
        }
    }
    if out.lines().count() <= 2 {
        if let Some(e) = first_error {
            return Err(e);
        }
    }
    Ok(out)
}

fn cmd_bound(resolved: &Resolved) -> Result<String> {
    let bound = resolved_bound(resolved)?;
    let mut out = String::new();
    out.push_str(&resolved.comment("bound"));
    out.push_str("\nlambda,bound\n");
    for lambda in resolved.lambdas() {
        resolved.network_config(lambda)?;
        out.push_str(&format!("{},{}\n", lambda, bound(lambda)));
    }
    Ok(out)
}

/// Default density grid of the tightness table, descending toward the
/// small-density regime where the bound becomes tight.
const TIGHTNESS_GRID: [f64; 4] = [1e-2, 3e-3, 1e-3, 3e-4];

fn cmd_tightness(resolved: &Resolved) -> Result<String> {
    let config = resolved.network_config(resolved.lambda)?;
    let grid = match &resolved.lambda_grid {
        Some(g) => {
            // bound tightens as lambda decreases; present rows that way
            let mut g = g.clone();
            g.sort_by(|a, b| b.total_cmp(a));
            g
        }
        None => TIGHTNESS_GRID.to_vec(),
    };
    let params = resolved.sim_params();
    let rows = tightness_diagnostic(&config, &grid, |lambda| {
        let c = config.with_lambda(lambda);
        Ok(estimate_outage(&c, &params)?.bc.p_hat)
    })?;
    let mut out = String::new();
    out.push_str(&resolved.comment("tightness"));
    out.push_str("\nlambda,bound,mc_estimate,ratio\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.lambda, row.bound, row.mc_estimate, row.ratio
        ));
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<()> {
    let (common, output) = match &cli.command {
        Command::Analytic(opts) => {
            let resolved = Resolved::from_opts(opts)?;
            install_thread_pool(resolved.threads);
            let out = cmd_analytic(&resolved)?;
            (resolved, out)
        }
        Command::Simulate(opts) => {
            let resolved = Resolved::from_opts(opts)?;
            install_thread_pool(resolved.threads);
            let out = cmd_simulate(&resolved)?;
            (resolved, out)
        }
        Command::Scdo(opts) => {
            let resolved = Resolved::from_opts(&opts.common)?;
            install_thread_pool(resolved.threads);
            let out = cmd_scdo(&resolved, opts.source.unwrap_or(SourceArg::Analytic))?;
            (resolved, out)
        }
        Command::Regions(opts) => {
            let resolved = Resolved::from_opts(opts)?;
            let out = cmd_regions(&resolved)?;
            (resolved, out)
        }
        Command::Optimize(opts) => {
            let resolved = Resolved::from_opts(&opts.common)?;
            install_thread_pool(resolved.threads);
            let out = cmd_optimize(&resolved, &opts.alpha_grid)?;
            (resolved, out)
        }
        Command::Bound(opts) => {
            let resolved = Resolved::from_opts(opts)?;
            install_thread_pool(resolved.threads);
            let out = cmd_bound(&resolved)?;
            (resolved, out)
        }
        Command::Tightness(opts) => {
            let resolved = Resolved::from_opts(opts)?;
            install_thread_pool(resolved.threads);
            let out = cmd_tightness(&resolved)?;
            (resolved, out)
        }
    };
    common.emit(&output)
}

/// Exit code of an error per the CLI contract: 2 validation, 3 numerics,
/// 4 I/O.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidConfig(_) | Error::Domain(_) => 2,
        Error::QuadratureFailure { .. } | Error::SlopeFit(_) => 3,
        Error::Io(_) => 4,
    }
}

/// Parse and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
