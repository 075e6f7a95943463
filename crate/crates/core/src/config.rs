//! Scenario files.
//!
//! A scenario is a JSON object; units are part of the key names. Unknown
//! keys are rejected.
//!
//! ```json
//! {
//!   "lambda0_nm": 833.0,
//!   "fwhm_nm": 20.0,
//!   "area_m2": 1000.0,
//!   "phi_rad": 0.0001,
//!   "omega_rad_per_s": 1e-9,
//!   "scheme": "both",
//!   "bias_order_m": 0,
//!   "delta_lambda_means": "fwhm",
//!   "paper_literal": false,
//!   "grid": { "half_width_sigmas": 6.0, "points": 4001 }
//! }
//! ```
//!
//! Only the first five keys are required.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::SchemeKind;
use crate::error::{Error, Result};
use crate::spectrum::{DEFAULT_GRID_POINTS, DEFAULT_HALF_WIDTH_SIGMAS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeSelection {
    Swm,
    Bwm,
    #[default]
    Both,
}

impl SchemeSelection {
    pub fn schemes(self) -> &'static [SchemeKind] {
        match self {
            SchemeSelection::Swm => &[SchemeKind::Swm],
            SchemeSelection::Bwm => &[SchemeKind::Bwm],
            SchemeSelection::Both => &[SchemeKind::Swm, SchemeKind::Bwm],
        }
    }

    pub fn single(self) -> Option<SchemeKind> {
        match self {
            SchemeSelection::Swm => Some(SchemeKind::Swm),
            SchemeSelection::Bwm => Some(SchemeKind::Bwm),
            SchemeSelection::Both => None,
        }
    }
}

/// What the source width `delta_lambda` stands for in the closed-form
/// wavelength shift and in the amplification factor `(lambda0/delta_lambda)^2`.
/// The probe itself is always built from the configured FWHM.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaLambdaMeans {
    /// The configured FWHM is used as is.
    #[default]
    Fwhm,
    /// The standard deviation derived from the configured FWHM.
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_half_width")]
    pub half_width_sigmas: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_half_width() -> f64 {
    DEFAULT_HALF_WIDTH_SIGMAS
}

fn default_points() -> usize {
    DEFAULT_GRID_POINTS
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            half_width_sigmas: DEFAULT_HALF_WIDTH_SIGMAS,
            points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lambda0_nm: f64,
    pub fwhm_nm: f64,
    pub area_m2: f64,
    pub phi_rad: f64,
    pub omega_rad_per_s: f64,
    #[serde(default)]
    pub scheme: SchemeSelection,
    #[serde(default)]
    pub bias_order_m: i64,
    #[serde(default)]
    pub delta_lambda_means: DeltaLambdaMeans,
    #[serde(default)]
    pub paper_literal: bool,
    #[serde(default)]
    pub grid: GridConfig,
}

impl ExperimentConfig {
    /// 833 nm center, 20 nm FWHM, 1000 m^2 loop, phi = 1e-4 rad, both schemes.
    pub fn nominal(omega_rad_per_s: f64) -> Self {
        ExperimentConfig {
            lambda0_nm: 833.0,
            fwhm_nm: 20.0,
            area_m2: 1000.0,
            phi_rad: 1e-4,
            omega_rad_per_s,
            scheme: SchemeSelection::Both,
            bias_order_m: 0,
            delta_lambda_means: DeltaLambdaMeans::Fwhm,
            paper_literal: false,
            grid: GridConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("lambda0_nm", self.lambda0_nm)?;
        positive("fwhm_nm", self.fwhm_nm)?;
        positive("area_m2", self.area_m2)?;
        if !(self.phi_rad > 0.0 && self.phi_rad < FRAC_PI_2) {
            return Err(Error::validation(
                "phi_rad",
                format!("must lie in the open interval (0, pi/2), got {}", self.phi_rad),
            ));
        }
        if !self.omega_rad_per_s.is_finite() {
            return Err(Error::validation("omega_rad_per_s", "must be finite"));
        }
        let k = self.grid.half_width_sigmas;
        if !(3.0..=12.0).contains(&k) {
            return Err(Error::validation(
                "grid.half_width_sigmas",
                format!("must lie in [3, 12], got {k}"),
            ));
        }
        let n = self.grid.points;
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::validation(
                "grid.points",
                format!("must be odd and at least 3, got {n}"),
            ));
        }
        Ok(())
    }

    /// Parses and validates a scenario. `origin` only labels errors.
    pub fn from_json_str(text: &str, origin: &Path) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(&mut de)
            .map_err(|e| classify(e.path().to_string(), e.into_inner(), origin))?;
        de.end().map_err(|e| classify(".".to_string(), e, origin))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_omega(&self, omega_rad_per_s: f64) -> Self {
        ExperimentConfig {
            omega_rad_per_s,
            ..self.clone()
        }
    }
}

fn positive(field: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be finite and positive, got {value}"),
        ))
    }
}

fn classify(path: String, e: serde_json::Error, origin: &Path) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => {
            let message = e.to_string();
            let field = match field_from_message(&message) {
                Some(key) if message.starts_with("missing field") && path != "." => {
                    format!("{path}.{key}")
                }
                Some(key) if message.starts_with("missing field") => key,
                _ if path != "." => path,
                _ => "<scenario>".to_string(),
            };
            Error::Validation { field, message }
        }
        _ => Error::Parse {
            path: origin.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// Pulls the key out of serde's "unknown field `x`" / "missing field `x`" messages.
fn field_from_message(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    ExperimentConfig::from_json_str(&text, path)
}
