//! Weak-value-amplified rotation sensing in a Sagnac interferometer.
//!
//! A rotating loop imprints a tiny optical path difference `g` between the
//! horizontally and vertically polarized counter-propagating beams. With a
//! near-orthogonal pre- and post-selection of polarization, that coupling
//! shifts the mean of the photon spectrum far more than `g` alone would.
//! Two schemes are modeled:
//!
//! * standard weak measurement (SWM): pre-selection, coupling, post-selection;
//! * biased weak measurement (BWM): an extra bias `psi_pre` with
//!   `p0 psi_pre + phi = m pi` moves the working point onto a dark fringe.
//!
//! Module map:
//!
//! * [`jones`]: polarization states, optical elements, weak values;
//! * [`spectrum`]: Gaussian probe on a momentum grid, moments, conversions;
//! * [`sagnac`]: rotation rate to coupling length, bias solver;
//! * [`engine`]: post-selected spectra, numeric and closed-form shifts;
//! * [`estimation`]: rotation-rate inversion and calibration curves;
//! * [`config`], [`output`], [`cli`]: scenario files, CSV/JSON output and
//!   the `sagnac-wva` command-line tool.
//!
//! The state algebra, the probe grid and the Sagnac mapping are generic over
//! [`Real`]; the aliases below name the instances the pipeline uses.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod estimation;
pub mod figure;
pub mod jones;
pub mod output;
pub mod sagnac;
pub mod scalar;
pub mod spectrum;

pub use config::{load_scenario, DeltaLambdaMeans, ExperimentConfig, SchemeSelection};
pub use engine::{compare_schemes, discrepancy_report, MeasurementResult, SchemeKind, Setup};
pub use error::{Error, Result};
pub use scalar::Real;

/// Double-double scalar (about 106 significant bits) used by the Jones cross-check.
pub type DoubleDouble = twofloat::TwoFloat;

pub type StateF64 = jones::PolarizationState<f64>;
pub type ElementF64 = jones::OpticalElement<f64>;
pub type OperatorF64 = jones::SystemOperator<f64>;
pub type WeakValueF64 = jones::WeakValue<f64>;
pub type StateDD = jones::PolarizationState<DoubleDouble>;
pub type ElementDD = jones::OpticalElement<DoubleDouble>;
pub type GridSpecF64 = spectrum::GridSpec<f64>;
pub type SpectrumF64 = spectrum::ProbeSpectrum<f64>;
pub type SagnacConfigF64 = sagnac::SagnacConfig<f64>;
pub type CouplingF64 = sagnac::CouplingResult<f64>;
pub type BiasF64 = sagnac::BiasConfig<f64>;

/// Version string written into result records.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
