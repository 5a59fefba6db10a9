//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 truncation or dimension
//! error, 4 numeric failure, 5 unsupported or degenerate input, 6 i/o error.

mod format;
mod spec;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use format::{csv_row, sci};
pub use spec::{parse_state_spec, StateSpec};

use crate::analytic::{ep_cat_lossy, ep_gaussian_heatbath};
use crate::channels::ep_decay_curve;
use crate::error::{Error, Result};
use crate::gaussian::{
    gaussian_eep_pure, gaussian_from_params, gaussian_log_negativity, gaussian_split,
    heat_bath_evolution,
};
use crate::measures::{
    entropic_entanglement_potential, entropic_entanglement_potential_pure, split_log_negativity,
};
use crate::operator_algebra::C64;
use crate::splitter::scan_transmissivity;
use crate::states::{
    cat_state, coherent_state, density_from_vector, displaced_squeezed_thermal, fock_state,
    thermal_state, CatSpec, FockDensity, FockVector, GaussianParams, Truncation,
    DEFAULT_TRUNCATION_TOL,
};

#[derive(Parser, Debug)]
#[command(name = "entpot", version, about = "Entanglement potential of single-mode optical states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Log-negativity after mixing the state with vacuum on a beamsplitter.
    Ep(EpArgs),
    /// Entanglement entropy after a balanced beamsplitter (pure states).
    Eep(EpArgs),
    /// EP over a grid of beamsplitter transmissivities (CSV).
    Scan(ScanArgs),
    /// EP under photon loss over a grid of γt (CSV).
    Decay(DecayArgs),
    /// Loss curves for squeezed, single-photon and cat states (CSV).
    Fig2(Fig2Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Truncated photon-number basis.
    Fock,
    /// Covariance matrices (Gaussian states only).
    Gaussian,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// State specification, e.g. `fock:1`, `cat:(1,3);(1,-3)`, `gauss:0.5,0,0`.
    pub spec: Option<String>,
    /// File with one state specification per line (`#` starts a comment).
    #[arg(long)]
    pub spec_file: Option<PathBuf>,
    /// Fock-space truncation dimension.
    #[arg(long, default_value_t = 40)]
    pub dim: usize,
    /// Largest population allowed beyond the truncation.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Engine::Fock)]
    pub engine: Engine,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EpArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.5)]
    pub transmissivity: f64,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Number of grid intervals; the grid has `t-steps + 1` points.
    #[arg(long, default_value_t = 40)]
    pub t_steps: usize,
}

#[derive(Args, Debug, Clone)]
pub struct DecayArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 5.0)]
    pub gamma_t_max: f64,
    /// Number of grid intervals; the grid has `steps + 1` points.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Add the closed-form loss curve where one exists (cats, Gaussian states).
    #[arg(long)]
    pub with_analytic: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 5.0)]
    pub gamma_t_max: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated numerical settings shared by the commands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub tol: f64,
    pub engine: Engine,
}

impl RunConfig {
    pub fn new(dim: usize, tol: f64, engine: Engine) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter(format!("--dim {dim} must be at least 2")));
        }
        if !(tol > 0.0 && tol <= 1e-4) {
            return Err(Error::Parameter(format!("--tol {tol} must lie in (0, 1e-4]")));
        }
        Ok(Self { dim, tol, engine })
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::new(self.dim).with_tol(self.tol)
    }
}

/// Runs the command and returns everything it would print.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Ep(a) => {
            let (specs, cfg) = prepare(&a.common)?;
            cmd_ep(&specs, a.transmissivity, cfg)
        }
        Command::Eep(a) => {
            let (specs, cfg) = prepare(&a.common)?;
            if a.transmissivity != 0.5 {
                return Err(Error::Parameter(
                    "the entropic potential is defined for a balanced beamsplitter".into(),
                ));
            }
            cmd_eep(&specs, cfg)
        }
        Command::Scan(a) => {
            let (specs, cfg) = prepare(&a.common)?;
            let grid = transmissivity_grid(a.t_min, a.t_max, a.t_steps)?;
            concat(specs.iter().map(|s| cmd_scan(s, &grid, cfg)))
        }
        Command::Decay(a) => {
            let (specs, cfg) = prepare(&a.common)?;
            let grid = gamma_t_grid(a.gamma_t_max, a.steps)?;
            concat(specs.iter().map(|s| cmd_decay(s, &grid, a.with_analytic, cfg)))
        }
        Command::Fig2(a) => {
            let cfg = RunConfig::new(a.dim, a.tol, Engine::Fock)?;
            cmd_fig2(&gamma_t_grid(a.gamma_t_max, a.steps)?, cfg)
        }
    }
}

/// Runs the command and writes its output to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<()> {
    let text = execute(cli)?;
    let out = match &cli.command {
        Command::Ep(a) | Command::Eep(a) => &a.common.out,
        Command::Scan(a) => &a.common.out,
        Command::Decay(a) => &a.common.out,
        Command::Fig2(a) => &a.out,
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn concat(parts: impl Iterator<Item = Result<String>>) -> Result<String> {
    parts.collect::<Result<Vec<_>>>().map(|v| v.concat())
}

fn prepare(common: &Common) -> Result<(Vec<StateSpec>, RunConfig)> {
    let cfg = RunConfig::new(common.dim, common.tol, common.engine)?;
    let mut specs = Vec::new();
    if let Some(text) = &common.spec {
        specs.push(parse_state_spec(text)?);
    }
    if let Some(path) = &common.spec_file {
        let content = std::fs::read_to_string(path)?;
        for (line_no, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            specs.push(parse_state_spec(line).map_err(|e| match e {
                Error::Parse { offset, message } => Error::Parse {
                    offset,
                    message: format!("{}:{}: {message}", path.display(), line_no + 1),
                },
                other => other,
            })?);
        }
    }
    if specs.is_empty() {
        return Err(Error::Parameter("no state specification given".into()));
    }
    Ok((specs, cfg))
}

fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| if i == steps { hi } else { lo + (hi - lo) * i as f64 / steps as f64 })
        .collect()
}

pub fn transmissivity_grid(t_min: f64, t_max: f64, t_steps: usize) -> Result<Vec<f64>> {
    if !(0.0 <= t_min && t_min <= t_max && t_max <= 1.0) {
        return Err(Error::Parameter(format!(
            "need 0 <= t-min <= t-max <= 1, got {t_min}, {t_max}"
        )));
    }
    if t_steps == 0 {
        return Err(Error::Parameter("--t-steps must be at least 1".into()));
    }
    Ok(linear_grid(t_min, t_max, t_steps))
}

pub fn gamma_t_grid(gamma_t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(gamma_t_max >= 0.0 && gamma_t_max.is_finite()) {
        return Err(Error::Parameter(format!("--gamma-t-max {gamma_t_max} must be >= 0")));
    }
    if steps == 0 {
        return Err(Error::Parameter("--steps must be at least 1".into()));
    }
    Ok(linear_grid(0.0, gamma_t_max, steps))
}

pub fn fock_density(spec: &StateSpec, trunc: Truncation) -> Result<FockDensity> {
    match spec {
        StateSpec::Thermal(nbar) => thermal_state(*nbar, trunc),
        StateSpec::Gauss(p) => displaced_squeezed_thermal(p, trunc),
        _ => Ok(density_from_vector(&pure_vector(spec, trunc).expect("pure family")?)),
    }
}

fn pure_vector(spec: &StateSpec, trunc: Truncation) -> Option<Result<FockVector>> {
    match spec {
        StateSpec::Fock(n) => Some(fock_state(*n, trunc)),
        StateSpec::Coherent(a) => Some(coherent_state(*a, trunc)),
        StateSpec::Cat(c) => Some(cat_state(c, trunc)),
        _ => None,
    }
}

pub fn gaussian_params(spec: &StateSpec) -> Result<GaussianParams> {
    let zero = C64::new(0.0, 0.0);
    match spec {
        StateSpec::Coherent(a) => GaussianParams::new(*a, 0.0, 0.0, 0.0),
        StateSpec::Thermal(n) => GaussianParams::new(zero, 0.0, 0.0, *n),
        StateSpec::Gauss(p) => Ok(*p),
        _ => Err(Error::Unsupported(format!(
            "{} states have no covariance-matrix description",
            spec.family()
        ))),
    }
}

fn cmd_ep(specs: &[StateSpec], transmissivity: f64, cfg: RunConfig) -> Result<String> {
    let mut out = String::new();
    for spec in specs {
        match cfg.engine {
            Engine::Fock => {
                let sigma = fock_density(spec, cfg.truncation())?;
                let ep = split_log_negativity(&sigma, transmissivity)?;
                writeln!(
                    out,
                    "{spec} ep={:.6} trace_norm={:.6} dim={}",
                    ep.value, ep.trace_norm, ep.truncation_dim
                )
                .unwrap();
            }
            Engine::Gaussian => {
                let g = gaussian_from_params(&gaussian_params(spec)?);
                let ep = gaussian_log_negativity(&gaussian_split(&g, transmissivity)?)?;
                writeln!(out, "{spec} ep={ep:.6} trace_norm={:.6} engine=gaussian", ep.exp2())
                    .unwrap();
            }
        }
    }
    Ok(out)
}

fn cmd_eep(specs: &[StateSpec], cfg: RunConfig) -> Result<String> {
    let mut out = String::new();
    for spec in specs {
        match cfg.engine {
            Engine::Fock => {
                let eep = match pure_vector(spec, cfg.truncation()) {
                    Some(psi) => entropic_entanglement_potential_pure(&psi?)?,
                    None => entropic_entanglement_potential(&fock_density(spec, cfg.truncation())?)?,
                };
                writeln!(out, "{spec} eep={eep:.6} dim={}", cfg.dim).unwrap();
            }
            Engine::Gaussian => {
                let eep = gaussian_eep_pure(&gaussian_params(spec)?)?;
                writeln!(out, "{spec} eep={eep:.6} engine=gaussian").unwrap();
            }
        }
    }
    Ok(out)
}

fn cmd_scan(spec: &StateSpec, grid: &[f64], cfg: RunConfig) -> Result<String> {
    let (points, argmax) = match cfg.engine {
        Engine::Fock => {
            let scan = scan_transmissivity(&fock_density(spec, cfg.truncation())?, grid)?;
            (scan.points, scan.argmax)
        }
        Engine::Gaussian => {
            let g = gaussian_from_params(&gaussian_params(spec)?);
            let points = grid
                .iter()
                .map(|&t| Ok((t, gaussian_log_negativity(&gaussian_split(&g, t)?)?)))
                .collect::<Result<Vec<_>>>()?;
            let best = points.iter().fold(points[0], |b, &p| if p.1 > b.1 { p } else { b });
            (points, best.0)
        }
    };
    let mut out = format!("# spec={spec}\ntransmissivity,ep\n");
    for (t, ep) in points {
        writeln!(out, "{}", csv_row(&[t, ep])).unwrap();
    }
    writeln!(out, "# argmax={}", sci(argmax)).unwrap();
    Ok(out)
}

/// Closed-form loss curve for families that have one.
fn analytic_decay(spec: &StateSpec, gamma_t: f64) -> Option<Result<f64>> {
    match spec {
        StateSpec::Cat(c) => Some(ep_cat_lossy(&c.with_unit_weights(), gamma_t)),
        StateSpec::Fock(_) => None,
        _ => Some(gaussian_params(spec).map(|p| ep_gaussian_heatbath(p.r() - p.r_c(), gamma_t, 0.0))),
    }
}

fn cmd_decay(spec: &StateSpec, grid: &[f64], with_analytic: bool, cfg: RunConfig) -> Result<String> {
    let mut rows: Vec<Vec<f64>> = match cfg.engine {
        Engine::Fock => ep_decay_curve(&fock_density(spec, cfg.truncation())?, grid)?
            .into_iter()
            .map(|(gt, ep)| vec![gt, ep])
            .collect(),
        Engine::Gaussian => {
            let p = gaussian_params(spec)?;
            grid.iter()
                .map(|&gt| Ok(vec![gt, heat_bath_evolution(&p, gt, 0.0)?.ep]))
                .collect::<Result<_>>()?
        }
    };
    let mut out = format!("# spec={spec}\n");
    let analytic = with_analytic && analytic_decay(spec, 0.0).is_some();
    if with_analytic && !analytic {
        writeln!(out, "# no closed-form loss curve for {} states", spec.family()).unwrap();
    }
    if analytic {
        for row in rows.iter_mut() {
            row.push(analytic_decay(spec, row[0]).expect("family checked")?);
        }
        out.push_str("gamma_t,ep,ep_analytic\n");
    } else {
        out.push_str("gamma_t,ep\n");
    }
    for row in rows {
        writeln!(out, "{}", csv_row(&row)).unwrap();
    }
    Ok(out)
}

pub const FIG2_HEADER: &str = "gamma_t,gauss_r5,gauss_r0p1,fock1,evencat3,evencat4";

fn cmd_fig2(grid: &[f64], cfg: RunConfig) -> Result<String> {
    let trunc = cfg.truncation();
    let one = density_from_vector(&fock_state(1, trunc)?);
    let cat3 = density_from_vector(&cat_state(&CatSpec::even(C64::new(3.0, 0.0)), trunc)?);
    let cat4 = density_from_vector(&cat_state(&CatSpec::even(C64::new(4.0, 0.0)), trunc)?);
    let fock1 = ep_decay_curve(&one, grid)?;
    let evencat3 = ep_decay_curve(&cat3, grid)?;
    let evencat4 = ep_decay_curve(&cat4, grid)?;

    let mut out = format!("{FIG2_HEADER}\n");
    let mut crossover = None;
    for (i, &gt) in grid.iter().enumerate() {
        let strong = ep_gaussian_heatbath(5.0, gt, 0.0);
        let weak = ep_gaussian_heatbath(0.1, gt, 0.0);
        let others = [fock1[i].1, evencat3[i].1, evencat4[i].1];
        if crossover.is_none() && others.iter().all(|&v| weak > v) {
            crossover = Some(gt);
        }
        writeln!(out, "{}", csv_row(&[gt, strong, weak, others[0], others[1], others[2]])).unwrap();
    }
    match crossover {
        Some(gt) => writeln!(out, "# crossover_gamma_t={}", sci(gt)).unwrap(),
        None => writeln!(out, "# crossover_gamma_t=none").unwrap(),
    }
    Ok(out)
}
