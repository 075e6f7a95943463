use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pre- and post-selected states are orthogonal to within {threshold:e} (|<post|pre>| = {overlap:e}); weak value undefined")]
    NearOrthogonalPostselection { overlap: f64, threshold: f64 },

    #[error("polarization state has zero norm")]
    ZeroNormState,

    #[error("system operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("width must be positive, got {0:e}")]
    NonPositiveWidth(f64),

    #[error("wavelength must be positive, got {0:e}")]
    NonPositiveWavelength(f64),

    #[error("momentum must be positive, got {0:e}")]
    NonPositiveMomentum(f64),

    #[error("{name} must be positive, got {value:e}")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("grid half width of {0} standard deviations is below the minimum of 3")]
    GridTooNarrow(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("post-selected intensity integrates to zero on this grid")]
    ZeroTotalIntensity,

    #[error("post-selection angle {0} rad is outside (0, pi/2)")]
    PhiOutOfRange(f64),

    #[error("calibration curve is not strictly monotone over [{omega_min:e}, {omega_max:e}] rad/s; numeric inversion is not applicable")]
    NonMonotonicCalibration { omega_min: f64, omega_max: f64 },

    #[error("observed shift {observed:e} m lies outside the calibrated range [{min:e}, {max:e}] m")]
    OutOfRangeObservation { observed: f64, min: f64, max: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}: file not found")]
    FileNotFound(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line tool.
    ///
    /// 2: configuration or validation, 3: numerical failure, 4: I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::FileNotFound(_) => 4,
            Error::NearOrthogonalPostselection { .. }
            | Error::ZeroTotalIntensity
            | Error::NonMonotonicCalibration { .. }
            | Error::OutOfRangeObservation { .. } => 3,
            _ => 2,
        }
    }
}
