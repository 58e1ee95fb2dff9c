//! Command-line front end. The `qtransduce` binary is a thin wrapper around
//! [`run`].

mod sweep;
mod thresholds;

pub use sweep::{clicks_csv, realistic_spd, sweep_csv, Axis, SweepSpec, CLICKS_HEADER, CONTOUR_TOLERANCE, SWEEP_HEADER};
pub use thresholds::{dmd_state_threshold, thresholds_report};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::montecarlo::{empirical_vs_analytic, parse_config, Comparison};
use crate::strategies::{DetectorKind, DetectorModel, StrategyKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FLAGGED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qtransduce", version, about = "Microwave-optical transduction models for multipartite entanglement distribution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-link ebit probability and capacity bound over a cooperativity x
    /// link-length grid, one row per strategy and cell.
    ///
    /// With the default grid this tabulates: efficiency versus cooperativity
    /// (eta column); the direct and vanilla teleported probability surfaces
    /// over (C, l) with the p = 1/2 contour (contour_half column); the
    /// intrinsic-generation surface; and the heralded-swap surface, whose
    /// maximum of 1/2 sits at C_th.
    Sweep(GridArgs),
    /// Closed-form cooperativity thresholds: C_th = 3 - 2 sqrt(2), the direct
    /// distribution threshold, and the C at which an n-client state survives
    /// direct distribution with probability 1/2.
    Thresholds(ThresholdArgs),
    /// Heralding-station click probabilities versus cooperativity: photon
    /// counter, ideal and realistic single-photon detector, and the fraction
    /// of single-photon-detector clicks that herald entanglement.
    Clicks(GridArgs),
    /// Monte Carlo run of a network config file, compared cell by cell with
    /// the closed forms. Exits with status 1 if any comparison is flagged.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Comma-separated strategies (dmd, vanilla-tmd, ie-tmd, ies-tmd) or "all".
    #[arg(long, default_value = "all")]
    strategy: String,
    #[arg(long, default_value_t = 1e-5)]
    cmin: f64,
    #[arg(long, default_value_t = 10.0)]
    cmax: f64,
    /// Log-spaced cooperativity points; 1 evaluates at --cmin only.
    #[arg(long, default_value_t = 61)]
    cpoints: usize,
    #[arg(long, default_value_t = 0.0)]
    lmin: f64,
    #[arg(long, default_value_t = 100.0)]
    lmax: f64,
    /// Linear link-length points in km; 1 evaluates at --lmin only.
    #[arg(long, default_value_t = 101)]
    lpoints: usize,
    #[arg(long, default_value_t = 1.0)]
    zeta_o: f64,
    #[arg(long, default_value_t = 1.0)]
    zeta_m: f64,
    /// Fiber attenuation length in km.
    #[arg(long, default_value_t = crate::channel::DEFAULT_ATTENUATION_LENGTH_KM)]
    att_length: f64,
    /// Heralding detector: counter or spd.
    #[arg(long, default_value = "counter")]
    detector: DetectorKind,
    /// Detector efficiency (sweep default 1, clicks default 0.25).
    #[arg(long)]
    det_eff: Option<f64>,
    /// Do not add the threshold cooperativities to the grid.
    #[arg(long)]
    exact_grid: bool,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    /// Client counts for the n-client threshold.
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2,3,4,5")]
    clients: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    zeta_o: f64,
    #[arg(long, default_value_t = 1.0)]
    zeta_m: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Network config file.
    config: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output base path: writes <out>.json and <out>.txt. Prints the text
    /// report if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses a comma-separated strategy list.
pub fn parse_strategies(list: &str) -> Result<Vec<StrategyKind>> {
    if list.trim() == "all" {
        return Ok(StrategyKind::ALL.to_vec());
    }
    list.split(',').map(str::parse).collect()
}

impl GridArgs {
    fn spec(&self, default_det_eff: f64) -> Result<SweepSpec> {
        let axis = |min: f64, max: f64, points: usize, log: bool| match (points, log) {
            (1, _) => Axis::Fixed(min),
            (_, true) => Axis::Log { min, max, points },
            (_, false) => Axis::Linear { min, max, points },
        };
        let detector = DetectorModel::new(self.detector, self.det_eff.unwrap_or(default_det_eff))?;
        Ok(SweepSpec {
            strategies: parse_strategies(&self.strategy)?,
            cooperativity: axis(self.cmin, self.cmax, self.cpoints, true),
            length_km: axis(self.lmin, self.lmax, self.lpoints, false),
            zeta_o: self.zeta_o,
            zeta_m: self.zeta_m,
            attenuation_length_km: self.att_length,
            detector,
            include_thresholds: !self.exact_grid,
        })
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Monte Carlo run of a config file's contents.
pub fn simulate(config_text: &str, trials: u64, seed: Option<u64>) -> Result<Comparison> {
    let mut cfg = parse_config(config_text)?;
    if let Some(seed) = seed {
        cfg.rng_seed = seed;
    }
    empirical_vs_analytic(&cfg, trials)
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Sweep(args) => {
            emit(&sweep_csv(&args.spec(1.0)?)?, args.out.as_deref())?;
        }
        Command::Clicks(args) => {
            emit(&clicks_csv(&args.spec(crate::strategies::REALISTIC_SPD_EFFICIENCY)?)?, args.out.as_deref())?;
        }
        Command::Thresholds(args) => {
            emit(&thresholds_report(&args.clients, args.zeta_o, args.zeta_m)?, args.out.as_deref())?;
        }
        Command::Simulate(args) => {
            let text = std::fs::read_to_string(&args.config)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", args.config.display())))?;
            let cmp = simulate(&text, args.trials, args.seed).map_err(|e| match e {
                Error::ConfigParse { line, message } => {
                    Error::InvalidConfig(format!("{}:{line}: {message}", args.config.display()))
                }
                other => other,
            })?;
            match &args.out {
                Some(base) => {
                    emit(&cmp.to_json(), Some(&with_extension(base, "json")))?;
                    emit(&cmp.to_text(), Some(&with_extension(base, "txt")))?;
                }
                None => emit(&cmp.to_text(), None)?,
            }
            if cmp.any_flagged() {
                eprintln!("statistical check failed: at least one comparison is outside 3 sigma");
                return Ok(EXIT_FLAGGED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
