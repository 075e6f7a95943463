//! Plot-ready data for the four-panel simulation figure.
//!
//! `figure3` always writes exactly these files into the output directory:
//!
//! | file | content |
//! |------|---------|
//! | `spectrum_omega_1.0e-9.csv` | probe and both post-selected spectra at 1.0e-9 rad/s |
//! | `spectrum_omega_1.9e-8.csv` | the same at 1.9e-8 rad/s |
//! | `sensitivity_ratio.csv` | wavelength shifts of both schemes and their ratio against rotation rate |
//! | `postselection_probability.csv` | integrated and center-point post-selection probabilities against rotation rate |
//!
//! Spectra are unnormalized (their integral is the post-selection
//! probability). A quantity that cannot be computed at some rotation rate,
//! such as a mean shift of a spectrum that integrates to zero, is written as
//! `nan` instead of aborting the run.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::engine::{postselection_probability, postselection_probability_point, SchemeKind, Setup};
use crate::error::{Error, Result};
use crate::estimation::{omega_grid, Spacing};
use crate::output::{spectra_csv, write_atomic, write_table_csv};

pub const SPECTRUM_OMEGAS: [(f64, &str); 2] = [
    (1.0e-9, "spectrum_omega_1.0e-9.csv"),
    (1.9e-8, "spectrum_omega_1.9e-8.csv"),
];
pub const SENSITIVITY_FILE: &str = "sensitivity_ratio.csv";
pub const PROBABILITY_FILE: &str = "postselection_probability.csv";

pub const SWEEP_OMEGA_MIN: f64 = 1e-10;
pub const SWEEP_OMEGA_MAX: f64 = 1e-7;
pub const SWEEP_POINTS: usize = 31;

pub const SENSITIVITY_HEADER: [&str; 7] = [
    "omega_rad_per_s",
    "delta_lambda_swm_numeric_m",
    "delta_lambda_bwm_numeric_m",
    "ratio_numeric",
    "delta_lambda_swm_analytic_m",
    "delta_lambda_bwm_analytic_m",
    "ratio_analytic",
];

pub const PROBABILITY_HEADER: [&str; 5] = [
    "omega_rad_per_s",
    "prob_swm_numeric",
    "prob_swm_point",
    "prob_bwm_numeric",
    "prob_bwm_point",
];

fn or_nan(r: Result<f64>) -> Result<f64> {
    match r {
        Err(Error::ZeroTotalIntensity) => Ok(f64::NAN),
        other => other,
    }
}

fn sensitivity_row(setup: &Setup, omega: f64) -> Result<Vec<f64>> {
    let swm = or_nan(setup.numeric_delta_lambda(SchemeKind::Swm, omega))?;
    let bwm = or_nan(setup.numeric_delta_lambda(SchemeKind::Bwm, omega))?;
    let swm_a = setup.analytic_delta_lambda(SchemeKind::Swm, omega)?;
    let bwm_a = setup.analytic_delta_lambda(SchemeKind::Bwm, omega)?;
    Ok(vec![omega, swm, bwm, bwm / swm, swm_a, bwm_a, bwm_a / swm_a])
}

fn probability_row(setup: &Setup, omega: f64) -> Result<Vec<f64>> {
    let g = setup.coupling(omega)?.g;
    let p0 = setup.probe.p0();
    let mut row = vec![omega];
    for scheme in [SchemeKind::Swm, SchemeKind::Bwm] {
        row.push(postselection_probability(&setup.spectrum(scheme, omega)?));
        row.push(postselection_probability_point(scheme, g, p0, setup.phi));
    }
    Ok(row)
}

/// Writes the four files and returns their paths in the order of the table above.
pub fn figure3(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let setup = Setup::from_config(cfg)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::with_capacity(4);

    for (omega, name) in SPECTRUM_OMEGAS {
        let swm = setup.spectrum(SchemeKind::Swm, omega)?;
        let bwm = setup.spectrum(SchemeKind::Bwm, omega)?;
        let text = spectra_csv(
            &setup.probe,
            &[("intensity_post_swm", &swm), ("intensity_post_bwm", &bwm)],
        )?;
        let path = out_dir.join(name);
        write_atomic(&path, text.as_bytes())?;
        written.push(path);
    }

    let omegas = omega_grid(SWEEP_OMEGA_MIN, SWEEP_OMEGA_MAX, SWEEP_POINTS, Spacing::Log)?;
    let sensitivity = omegas
        .par_iter()
        .map(|&w| sensitivity_row(&setup, w))
        .collect::<Result<Vec<_>>>()?;
    let path = out_dir.join(SENSITIVITY_FILE);
    write_table_csv(&path, &SENSITIVITY_HEADER, &sensitivity)?;
    written.push(path);

    let probability = omegas
        .par_iter()
        .map(|&w| probability_row(&setup, w))
        .collect::<Result<Vec<_>>>()?;
    let path = out_dir.join(PROBABILITY_FILE);
    write_table_csv(&path, &PROBABILITY_HEADER, &probability)?;
    written.push(path);

    Ok(written)
}
