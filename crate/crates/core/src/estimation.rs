//! Rotation rate from an observed wavelength shift.
//!
//! The closed-form shifts are linear in the rotation rate and invert
//! directly. The numerical forward model is inverted by bisection on a
//! calibration curve, which must be strictly monotone over the sampled range.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{SchemeKind, Setup};
use crate::error::{Error, Result};
use crate::sagnac::SPEED_OF_LIGHT;

/// Relative width of the final bisection bracket.
pub const BISECTION_TOLERANCE: f64 = 1e-6;
pub const BISECTION_MAX_ITERATIONS: usize = 60;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CurveMode {
    #[default]
    Numeric,
    Analytic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCurve {
    /// rad/s, strictly increasing.
    pub omega_values: Vec<f64>,
    /// m
    pub delta_lambda_values: Vec<f64>,
    pub scheme: SchemeKind,
    pub mode: CurveMode,
    /// Whether `delta_lambda_values` is strictly monotone.
    pub monotone: bool,
}

impl CalibrationCurve {
    pub fn len(&self) -> usize {
        self.omega_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_values.is_empty()
    }

    pub fn delta_lambda_range(&self) -> (f64, f64) {
        let min = self.delta_lambda_values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self
            .delta_lambda_values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (min, max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimationMethod {
    AnalyticClosedForm,
    NumericBisection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaEstimate {
    /// rad/s
    pub omega_hat: f64,
    pub method: EstimationMethod,
    /// `|predicted delta_lambda - observed delta_lambda|`, m.
    pub residual: f64,
}

pub fn strictly_monotone(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] > w[0]) || values.windows(2).all(|w| w[1] < w[0])
}

/// `n` rotation rates from `omega_min` to `omega_max`, both endpoints included.
pub fn omega_grid(omega_min: f64, omega_max: f64, n: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(omega_min >= 0.0 && omega_max > omega_min && omega_max.is_finite()) {
        return Err(Error::InvalidSweep(format!(
            "need 0 <= omega_min < omega_max, got [{omega_min}, {omega_max}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidSweep(format!("need at least 2 points, got {n}")));
    }
    let last = (n - 1) as f64;
    let mut values: Vec<f64> = match spacing {
        Spacing::Linear => (0..n)
            .map(|i| omega_min + (omega_max - omega_min) * i as f64 / last)
            .collect(),
        Spacing::Log => {
            if omega_min == 0.0 {
                return Err(Error::InvalidSweep("log spacing needs omega_min > 0".into()));
            }
            let (a, b) = (omega_min.ln(), omega_max.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / last).exp()).collect()
        }
    };
    values[0] = omega_min;
    values[n - 1] = omega_max;
    if !values.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidSweep("rotation rates are not strictly increasing".into()));
    }
    Ok(values)
}

/// Evaluates the wavelength shift at each rotation rate. Points are computed
/// in parallel and returned in order of `omega`.
pub fn calibration_curve(
    setup: &Setup,
    scheme: SchemeKind,
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
    mode: CurveMode,
    spacing: Spacing,
) -> Result<CalibrationCurve> {
    let omega_values = omega_grid(omega_min, omega_max, n_points, spacing)?;
    let delta_lambda_values = omega_values
        .par_iter()
        .map(|&omega| forward(setup, scheme, omega, mode))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = strictly_monotone(&delta_lambda_values);
    Ok(CalibrationCurve {
        omega_values,
        delta_lambda_values,
        scheme,
        mode,
        monotone,
    })
}

fn forward(setup: &Setup, scheme: SchemeKind, omega: f64, mode: CurveMode) -> Result<f64> {
    match mode {
        CurveMode::Numeric => setup.numeric_delta_lambda(scheme, omega),
        CurveMode::Analytic => setup.analytic_delta_lambda(scheme, omega),
    }
}

/// Solves the closed-form wavelength shift for the rotation rate:
/// `Omega = delta_lambda tan(phi) c / (16 pi S)` for BWM, further divided by
/// `(delta_lambda_src / lambda0)^2` for SWM. In paper-literal mode `phi`
/// replaces `tan(phi)`, matching the forward formula.
pub fn estimate_omega_analytic(delta_lambda_obs: f64, scheme: SchemeKind, setup: &Setup) -> Result<OmegaEstimate> {
    let phi = setup.phi;
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::PhiOutOfRange(phi));
    }
    let slope = if setup.paper_literal { phi } else { phi.tan() };
    let mut omega_hat = delta_lambda_obs * slope * SPEED_OF_LIGHT / (16.0 * PI * setup.area);
    if scheme == SchemeKind::Swm {
        omega_hat /= (setup.delta_lambda / setup.lambda0).powi(2);
    }
    let predicted = setup.analytic_delta_lambda(scheme, omega_hat)?;
    Ok(OmegaEstimate {
        omega_hat,
        method: EstimationMethod::AnalyticClosedForm,
        residual: (predicted - delta_lambda_obs).abs(),
    })
}

/// Bisection against the numerical forward model inside the curve segment
/// that brackets the observation.
pub fn estimate_omega_numeric(delta_lambda_obs: f64, curve: &CalibrationCurve, setup: &Setup) -> Result<OmegaEstimate> {
    let omegas = &curve.omega_values;
    let values = &curve.delta_lambda_values;
    if omegas.len() < 2 || omegas.len() != values.len() {
        return Err(Error::InvalidSweep(
            "calibration curve needs at least 2 matching rows".into(),
        ));
    }
    if !curve.monotone || !strictly_monotone(values) {
        return Err(Error::NonMonotonicCalibration {
            omega_min: omegas[0],
            omega_max: omegas[omegas.len() - 1],
        });
    }
    let (min, max) = curve.delta_lambda_range();
    if !(delta_lambda_obs >= min && delta_lambda_obs <= max) {
        return Err(Error::OutOfRangeObservation {
            observed: delta_lambda_obs,
            min,
            max,
        });
    }
    let rising = values[values.len() - 1] > values[0];
    // first segment whose far end is past the observation
    let seg = values
        .windows(2)
        .position(|w| {
            if rising {
                w[1] >= delta_lambda_obs
            } else {
                w[1] <= delta_lambda_obs
            }
        })
        .unwrap_or(values.len() - 2);

    let (mut lo, mut hi) = (omegas[seg], omegas[seg + 1]);
    let mut f_lo = values[seg] - delta_lambda_obs;
    for _ in 0..BISECTION_MAX_ITERATIONS {
        if hi - lo <= BISECTION_TOLERANCE * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = setup.numeric_delta_lambda(curve.scheme, mid)? - delta_lambda_obs;
        if f_mid == 0.0 {
            (lo, hi) = (mid, mid);
            break;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let omega_hat = 0.5 * (lo + hi);
    let predicted = setup.numeric_delta_lambda(curve.scheme, omega_hat)?;
    Ok(OmegaEstimate {
        omega_hat,
        method: EstimationMethod::NumericBisection,
        residual: (predicted - delta_lambda_obs).abs(),
    })
}
