//! Rotation rate to weak-coupling strength, and the bias that parks the
//! biased scheme on a dark fringe.

use crate::error::Result;
use crate::scalar::Real;
use crate::spectrum::wavelength_to_momentum;

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SagnacConfig<T> {
    /// Rotation rate, rad/s. The sign gives the direction.
    pub omega: T,
    /// Area enclosed by the loop, m^2.
    pub area: T,
    /// Vacuum center wavelength, m.
    pub lambda0: T,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CouplingResult<T> {
    /// Fringe shift, in fringes.
    pub delta_z: T,
    /// Sagnac phase `2 pi delta_z`, rad.
    pub delta_phi: T,
    /// Optical delay `g / c`, s.
    pub tau: T,
    /// Coupling length `delta_phi / p0`, m.
    pub g: T,
}

/// Pre-coupling that satisfies `p0 psi_pre + phi = m pi`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BiasConfig<T> {
    pub phi: T,
    pub order_m: i64,
    /// Bias length, m.
    pub psi_pre: T,
}

/// `4 Omega S / (lambda0 c)`.
pub fn fringe_shift<T: Real>(cfg: &SagnacConfig<T>) -> T {
    T::lit(4.0) * cfg.omega * cfg.area / (cfg.lambda0 * T::lit(SPEED_OF_LIGHT))
}

/// `4 S Omega / c`, the coupling length without passing through the fringe shift.
pub fn coupling_length_direct<T: Real>(omega: T, area: T) -> T {
    T::lit(4.0) * area * omega / T::lit(SPEED_OF_LIGHT)
}

pub fn coupling_chain<T: Real>(cfg: &SagnacConfig<T>) -> Result<CouplingResult<T>> {
    let p0 = wavelength_to_momentum(cfg.lambda0)?;
    let delta_z = fringe_shift(cfg);
    let delta_phi = T::TAU() * delta_z;
    let g = delta_phi / p0;
    Ok(CouplingResult {
        delta_z,
        delta_phi,
        tau: g / T::lit(SPEED_OF_LIGHT),
        g,
    })
}

pub fn bias_phase<T: Real>(phi: T, lambda0: T, order_m: i64) -> Result<BiasConfig<T>> {
    let p0 = wavelength_to_momentum(lambda0)?;
    Ok(BiasConfig {
        phi,
        order_m,
        psi_pre: (T::lit(order_m as f64) * T::PI() - phi) / p0,
    })
}
