//! Momentum-space probe spectrum on a uniform grid.
//!
//! The probe is a Gaussian in photon momentum `p = 2 pi / lambda`, sampled on
//! an odd number of nodes so that the center momentum sits on a node. All
//! integrals use the trapezoidal rule, evaluated left to right.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_HALF_WIDTH_SIGMAS: f64 = 6.0;
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// Ratio `sigma_lambda / lambda0` above which the linearized wavelength to
/// momentum conversion is flagged.
pub const NARROWBAND_LIMIT: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    half_width_sigmas: T,
    points: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(half_width_sigmas: T, points: usize) -> Result<Self> {
        if !half_width_sigmas.is_finite() {
            return Err(Error::InvalidGrid("half width must be finite".into()));
        }
        if half_width_sigmas < T::lit(3.0) {
            return Err(Error::GridTooNarrow(half_width_sigmas.to_f64_lossy()));
        }
        if half_width_sigmas > T::lit(12.0) {
            return Err(Error::InvalidGrid(format!(
                "half width of {half_width_sigmas} standard deviations exceeds 12"
            )));
        }
        if points < 3 || points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count must be odd and at least 3, got {points}"
            )));
        }
        Ok(GridSpec {
            half_width_sigmas,
            points,
        })
    }

    pub fn half_width_sigmas(&self) -> T {
        self.half_width_sigmas
    }

    pub fn points(&self) -> usize {
        self.points
    }
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        GridSpec {
            half_width_sigmas: T::lit(DEFAULT_HALF_WIDTH_SIGMAS),
            points: DEFAULT_GRID_POINTS,
        }
    }
}

/// Intensity sampled on a momentum grid centered on `p0`.
///
/// A freshly built probe integrates to one; post-selected spectra share the
/// probe's grid and keep their unnormalized weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSpectrum<T> {
    p_grid: Vec<T>,
    intensity: Vec<T>,
    p0: T,
    sigma_p: T,
}

impl<T: Real> ProbeSpectrum<T> {
    /// Wraps existing samples. The grid must be strictly increasing, the
    /// intensity nonnegative and of the same length.
    pub fn from_samples(p_grid: Vec<T>, intensity: Vec<T>, p0: T, sigma_p: T) -> Result<Self> {
        if p_grid.len() != intensity.len() || p_grid.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "{} grid nodes for {} intensity samples",
                p_grid.len(),
                intensity.len()
            )));
        }
        if p_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("momentum grid is not strictly increasing".into()));
        }
        if intensity.iter().any(|&i| !(i >= T::zero()) || !i.is_finite()) {
            return Err(Error::InvalidGrid("intensity must be finite and nonnegative".into()));
        }
        Ok(ProbeSpectrum {
            p_grid,
            intensity,
            p0,
            sigma_p,
        })
    }

    /// Same grid, new intensity. Panics if the lengths differ.
    pub fn with_intensity(&self, intensity: Vec<T>) -> Self {
        assert_eq!(intensity.len(), self.p_grid.len(), "intensity length must match grid");
        ProbeSpectrum {
            p_grid: self.p_grid.clone(),
            intensity,
            p0: self.p0,
            sigma_p: self.sigma_p,
        }
    }

    pub fn p_grid(&self) -> &[T] {
        &self.p_grid
    }

    pub fn intensity(&self) -> &[T] {
        &self.intensity
    }

    pub fn p0(&self) -> T {
        self.p0
    }

    pub fn sigma_p(&self) -> T {
        self.sigma_p
    }

    pub fn len(&self) -> usize {
        self.p_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_grid.is_empty()
    }

    /// Index of the node closest to `p0`.
    pub fn center_index(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.p_grid.iter().enumerate() {
            if (p - self.p0).abs() < (self.p_grid[best] - self.p0).abs() {
                best = i;
            }
        }
        best
    }

    pub fn total(&self) -> T {
        trapezoid(&self.p_grid, &self.intensity)
    }

    pub fn peak(&self) -> T {
        self.intensity.iter().copied().fold(T::zero(), T::max)
    }
}

/// Trapezoidal rule over a nonuniform grid.
pub fn trapezoid<T: Real>(x: &[T], y: &[T]) -> T {
    let half = T::lit(0.5);
    x.windows(2).zip(y.windows(2)).fold(T::zero(), |acc, (xw, yw)| {
        acc + (xw[1] - xw[0]) * (yw[0] + yw[1]) * half
    })
}

pub fn fwhm_to_sigma<T: Real>(fwhm: T) -> Result<T> {
    if !(fwhm > T::zero()) || !fwhm.is_finite() {
        return Err(Error::NonPositiveWidth(fwhm.to_f64_lossy()));
    }
    Ok(fwhm / fwhm_per_sigma::<T>())
}

pub fn sigma_to_fwhm<T: Real>(sigma: T) -> Result<T> {
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::NonPositiveWidth(sigma.to_f64_lossy()));
    }
    Ok(sigma * fwhm_per_sigma::<T>())
}

/// `2 sqrt(2 ln 2)`.
fn fwhm_per_sigma<T: Real>() -> T {
    T::lit(2.0) * (T::lit(2.0) * T::LN_2()).sqrt()
}

pub fn wavelength_to_momentum<T: Real>(lambda: T) -> Result<T> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::NonPositiveWavelength(lambda.to_f64_lossy()));
    }
    Ok(T::TAU() / lambda)
}

pub fn momentum_to_wavelength<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::NonPositiveMomentum(p.to_f64_lossy()));
    }
    Ok(T::TAU() / p)
}

/// Momentum spread `2 pi sigma_lambda / lambda0^2` for a narrowband source.
pub fn sigma_lambda_to_sigma_p<T: Real>(sigma_lambda: T, lambda0: T) -> Result<T> {
    if !(sigma_lambda >= T::zero()) || !sigma_lambda.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "sigma_lambda",
            value: sigma_lambda.to_f64_lossy(),
        });
    }
    if !(lambda0 > T::zero()) || !lambda0.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "lambda0",
            value: lambda0.to_f64_lossy(),
        });
    }
    if sigma_lambda / lambda0 > T::lit(NARROWBAND_LIMIT) {
        log::warn!(
            "sigma_lambda / lambda0 = {} exceeds {NARROWBAND_LIMIT}; linearized momentum width is inaccurate",
            sigma_lambda / lambda0
        );
    }
    Ok(T::TAU() * sigma_lambda / (lambda0 * lambda0))
}

/// Normalized Gaussian probe centered on `2 pi / lambda0`.
pub fn gaussian_probe<T: Real>(lambda0: T, fwhm_lambda: T, grid: &GridSpec<T>) -> Result<ProbeSpectrum<T>> {
    let p0 = wavelength_to_momentum(lambda0)?;
    let sigma_lambda = fwhm_to_sigma(fwhm_lambda)?;
    let sigma_p = sigma_lambda_to_sigma_p(sigma_lambda, lambda0)?;
    if grid.half_width_sigmas() < T::lit(3.0) {
        return Err(Error::GridTooNarrow(grid.half_width_sigmas().to_f64_lossy()));
    }
    let mid = (grid.points() - 1) / 2;
    let step = grid.half_width_sigmas() * sigma_p / T::lit(mid as f64);
    let norm = T::one() / (sigma_p * T::TAU().sqrt());
    let two_var = T::lit(2.0) * sigma_p * sigma_p;
    let mut p_grid = Vec::with_capacity(grid.points());
    let mut intensity = Vec::with_capacity(grid.points());
    for i in 0..grid.points() {
        let offset = T::lit(i as f64 - mid as f64) * step;
        p_grid.push(p0 + offset);
        intensity.push(norm * (-(offset * offset) / two_var).exp());
    }
    normalize(&ProbeSpectrum {
        p_grid,
        intensity,
        p0,
        sigma_p,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments<T> {
    pub mean: T,
    /// `mean - p0`, computed without forming `mean` first.
    pub mean_offset: T,
    pub variance: T,
}

pub fn moments<T: Real>(s: &ProbeSpectrum<T>) -> Result<Moments<T>> {
    let total = s.total();
    if !(total > T::min_positive_value()) || !total.is_finite() {
        return Err(Error::ZeroTotalIntensity);
    }
    let offsets: Vec<T> = s.p_grid.iter().map(|&p| p - s.p0).collect();
    let weighted: Vec<T> = offsets.iter().zip(&s.intensity).map(|(&x, &i)| x * i).collect();
    let mean_offset = trapezoid(&s.p_grid, &weighted) / total;
    let second: Vec<T> = offsets
        .iter()
        .zip(&s.intensity)
        .map(|(&x, &i)| (x - mean_offset) * (x - mean_offset) * i)
        .collect();
    Ok(Moments {
        mean: s.p0 + mean_offset,
        mean_offset,
        variance: trapezoid(&s.p_grid, &second) / total,
    })
}

pub fn normalize<T: Real>(s: &ProbeSpectrum<T>) -> Result<ProbeSpectrum<T>> {
    let total = s.total();
    if !(total > T::min_positive_value()) || !total.is_finite() {
        return Err(Error::ZeroTotalIntensity);
    }
    Ok(s.with_intensity(s.intensity.iter().map(|&i| i / total).collect()))
}
