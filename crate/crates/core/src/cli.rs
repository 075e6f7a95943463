//! The `sagnac-wva` command-line tool.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failure, 4 I/O error. Diagnostics go to standard error; `estimate` prints
//! its JSON result to standard output, every other command writes files.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{load_scenario, ExperimentConfig};
use crate::engine::{compare_schemes, SchemeKind, Setup};
use crate::error::{Error, Result};
use crate::estimation::{self, CurveMode, OmegaEstimate, Spacing};
use crate::figure;
use crate::output::{self, RunRecord};

#[derive(Debug, Parser)]
#[command(name = "sagnac-wva", version, about = "Weak-value-amplified Sagnac rotation sensing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the probe and post-selected spectrum at the configured rotation rate.
    Spectrum {
        #[command(flatten)]
        io: ConfigOut,
        /// Overrides the scheme in the scenario; required when it is `both`.
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
    },
    /// Run both schemes and write results plus the numeric-vs-analytic table as JSON.
    Compare {
        #[command(flatten)]
        io: ConfigOut,
    },
    /// Wavelength shift against rotation rate, one column per scheme.
    Sweep {
        #[command(flatten)]
        io: ConfigOut,
        #[arg(long, allow_hyphen_values = true)]
        omega_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        omega_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, value_enum)]
        mode: CurveMode,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
    },
    /// Estimate the rotation rate from an observed wavelength shift.
    Estimate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "delta-lambda-m", allow_hyphen_values = true)]
        delta_lambda_m: f64,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// Calibration range for the numeric method, rad/s.
        #[arg(long, default_value_t = 1e-10)]
        omega_min: f64,
        #[arg(long, default_value_t = 1e-8)]
        omega_max: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
    },
    /// Write the four data files behind the simulation figure into a directory.
    Figure3 {
        #[command(flatten)]
        io: ConfigOut,
    },
}

#[derive(Debug, Args)]
pub struct ConfigOut {
    /// Scenario JSON file.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Swm,
    Bwm,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Swm => SchemeKind::Swm,
            SchemeArg::Bwm => SchemeKind::Bwm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Numeric,
}

#[derive(Debug, Serialize)]
struct EstimateOutput {
    scheme: SchemeKind,
    delta_lambda_obs_m: f64,
    #[serde(flatten)]
    estimate: OmegaEstimate,
}

fn single_scheme(cfg: &ExperimentConfig, flag: Option<SchemeArg>) -> Result<SchemeKind> {
    match (flag, cfg.scheme.single()) {
        (Some(s), _) => Ok(s.into()),
        (None, Some(s)) => Ok(s),
        (None, None) => Err(Error::validation(
            "scheme",
            "scenario selects both schemes; pass --scheme swm or --scheme bwm",
        )),
    }
}

fn schemes(cfg: &ExperimentConfig, flag: Option<SchemeArg>) -> Vec<SchemeKind> {
    match flag {
        Some(s) => vec![s.into()],
        None => cfg.scheme.schemes().to_vec(),
    }
}

fn spectrum(io: &ConfigOut, scheme: Option<SchemeArg>) -> Result<()> {
    let cfg = load_scenario(&io.config)?;
    let scheme = single_scheme(&cfg, scheme)?;
    let setup = Setup::from_config(&cfg)?;
    let post = setup.spectrum(scheme, cfg.omega_rad_per_s)?;
    output::write_spectrum_csv(&io.out, &setup.probe, &post)
}

fn compare(io: &ConfigOut) -> Result<()> {
    let cfg = load_scenario(&io.config)?;
    let results = compare_schemes(&cfg)?;
    output::write_results_json(&io.out, &RunRecord::new(cfg, results))
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    io: &ConfigOut,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    mode: CurveMode,
    spacing: Spacing,
    scheme: Option<SchemeArg>,
) -> Result<()> {
    let cfg = load_scenario(&io.config)?;
    let setup = Setup::from_config(&cfg)?;
    let schemes = schemes(&cfg, scheme);
    let curves = schemes
        .iter()
        .map(|&s| estimation::calibration_curve(&setup, s, omega_min, omega_max, points, mode, spacing))
        .collect::<Result<Vec<_>>>()?;
    for c in curves.iter().filter(|c| !c.monotone) {
        log::warn!(
            "{} curve is not strictly monotone on [{omega_min:e}, {omega_max:e}]",
            c.scheme
        );
    }
    let names: Vec<String> = schemes.iter().map(|s| format!("delta_lambda_{s}_m")).collect();
    let mut header = vec!["omega_rad_per_s"];
    header.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<f64>> = (0..points)
        .map(|i| {
            let mut row = vec![curves[0].omega_values[i]];
            row.extend(curves.iter().map(|c| c.delta_lambda_values[i]));
            row
        })
        .collect();
    output::write_table_csv(&io.out, &header, &rows)
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    config: &Path,
    delta_lambda_m: f64,
    method: MethodArg,
    scheme: Option<SchemeArg>,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: Spacing,
) -> Result<String> {
    let cfg = load_scenario(config)?;
    let scheme = single_scheme(&cfg, scheme)?;
    let setup = Setup::from_config(&cfg)?;
    let estimate = match method {
        MethodArg::Analytic => estimation::estimate_omega_analytic(delta_lambda_m, scheme, &setup)?,
        MethodArg::Numeric => {
            let curve = estimation::calibration_curve(
                &setup,
                scheme,
                omega_min,
                omega_max,
                points,
                CurveMode::Numeric,
                spacing,
            )?;
            estimation::estimate_omega_numeric(delta_lambda_m, &curve, &setup)?
        }
    };
    output::canonical_json(&EstimateOutput {
        scheme,
        delta_lambda_obs_m: delta_lambda_m,
        estimate,
    })
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Spectrum { io, scheme } => spectrum(&io, scheme),
        Command::Compare { io } => compare(&io),
        Command::Sweep {
            io,
            omega_min,
            omega_max,
            points,
            mode,
            spacing,
            scheme,
        } => sweep(&io, omega_min, omega_max, points, mode, spacing, scheme),
        Command::Estimate {
            config,
            delta_lambda_m,
            method,
            scheme,
            omega_min,
            omega_max,
            points,
            spacing,
        } => {
            let text = estimate(
                &config,
                delta_lambda_m,
                method,
                scheme,
                omega_min,
                omega_max,
                points,
                spacing,
            )?;
            print!("{text}");
            Ok(())
        }
        Command::Figure3 { io } => {
            let cfg = load_scenario(&io.config)?;
            for path in figure::figure3(&cfg, &io.out)? {
                log::info!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn ambiguous_scheme_is_a_configuration_error() {
        use crate::config::SchemeSelection;
        let cfg = ExperimentConfig::nominal(1e-9);
        assert_eq!(single_scheme(&cfg, None).unwrap_err().exit_code(), 2);
        assert_eq!(single_scheme(&cfg, Some(SchemeArg::Bwm)).unwrap(), SchemeKind::Bwm);
        let swm = ExperimentConfig {
            scheme: SchemeSelection::Swm,
            ..cfg
        };
        assert_eq!(single_scheme(&swm, None).unwrap(), SchemeKind::Swm);
    }

    #[test]
    fn only_help_and_version_are_clean_exits() {
        let stderr = |args: &[&str]| Cli::try_parse_from(args).unwrap_err().use_stderr();
        assert!(stderr(&["sagnac-wva", "frobnicate"]));
        assert!(stderr(&["sagnac-wva"]));
        assert!(!stderr(&["sagnac-wva", "--help"]));
        assert!(!stderr(&["sagnac-wva", "--version"]));
        assert!(!stderr(&["sagnac-wva", "sweep", "--help"]));
    }
}
