//! Post-selected probe spectra and the shifts read off them.
//!
//! The numerical spectrum is the reference: for every grid node the
//! post-selection probability `sin^2(p L + beta)` multiplies the probe
//! intensity, where `L` is the coupling length seen by the probe (`g`, or
//! `g + psi_pre` once the bias is applied) and `beta` the post-selection
//! angle. The same spectrum is also evaluated through the Jones algebra in
//! double-double precision so the two routes can be compared node by node.
//!
//! The closed-form shifts and probabilities are kept alongside for
//! comparison and are labeled paper-analytic wherever they are written out.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::config::{DeltaLambdaMeans, ExperimentConfig};
use crate::error::{Error, Result};
use crate::jones::{self, SystemOperator};
use crate::sagnac::{self, BiasConfig, CouplingResult, SagnacConfig};
use crate::scalar::Real;
use crate::spectrum::{self, GridSpec, ProbeSpectrum};
use crate::DoubleDouble;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// Standard weak measurement.
    Swm,
    /// Biased weak measurement.
    Bwm,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Swm => "swm",
            SchemeKind::Bwm => "bwm",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mean shift in momentum and the corresponding wavelength shift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shift {
    /// 1/m
    pub delta_p: f64,
    /// m
    pub delta_lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementResult {
    pub scheme: SchemeKind,
    pub delta_p_numeric: f64,
    pub delta_lambda_numeric: f64,
    pub delta_p_analytic: f64,
    pub delta_lambda_analytic: f64,
    pub postselect_prob_numeric: f64,
    pub postselect_prob_pointform: f64,
    pub amplification_factor: f64,
    /// Largest nodewise relative gap between the closed-form spectrum and the
    /// Jones-matrix spectrum.
    pub jones_max_relative_deviation: f64,
}

/// Everything derived from a scenario that does not depend on the rotation rate.
#[derive(Clone, Debug)]
pub struct Setup {
    /// m
    pub lambda0: f64,
    /// m
    pub fwhm: f64,
    /// m
    pub sigma_lambda: f64,
    /// Width entering the closed-form SWM wavelength shift, m.
    pub delta_lambda: f64,
    /// m^2
    pub area: f64,
    /// rad
    pub phi: f64,
    pub bias: BiasConfig<f64>,
    pub paper_literal: bool,
    pub probe: ProbeSpectrum<f64>,
}

impl Setup {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let lambda0 = cfg.lambda0_nm * 1e-9;
        let fwhm = cfg.fwhm_nm * 1e-9;
        let sigma_lambda = spectrum::fwhm_to_sigma(fwhm)?;
        let grid = GridSpec::new(cfg.grid.half_width_sigmas, cfg.grid.points)?;
        Ok(Setup {
            lambda0,
            fwhm,
            sigma_lambda,
            delta_lambda: match cfg.delta_lambda_means {
                DeltaLambdaMeans::Fwhm => fwhm,
                DeltaLambdaMeans::Sigma => sigma_lambda,
            },
            area: cfg.area_m2,
            phi: cfg.phi_rad,
            bias: sagnac::bias_phase(cfg.phi_rad, lambda0, cfg.bias_order_m)?,
            paper_literal: cfg.paper_literal,
            probe: spectrum::gaussian_probe(lambda0, fwhm, &grid)?,
        })
    }

    pub fn coupling(&self, omega: f64) -> Result<CouplingResult<f64>> {
        sagnac::coupling_chain(&SagnacConfig {
            omega,
            area: self.area,
            lambda0: self.lambda0,
        })
    }

    pub fn amplification_factor(&self) -> f64 {
        amplification_factor(self.lambda0, self.delta_lambda)
    }

    fn bias_for(&self, scheme: SchemeKind) -> Option<&BiasConfig<f64>> {
        match scheme {
            SchemeKind::Swm => None,
            SchemeKind::Bwm => Some(&self.bias),
        }
    }

    /// Closed-form post-selected spectrum at rotation rate `omega`.
    pub fn spectrum(&self, scheme: SchemeKind, omega: f64) -> Result<ProbeSpectrum<f64>> {
        let g = self.coupling(omega)?.g;
        Ok(postselected_spectrum(
            &self.probe,
            g,
            self.bias_for(scheme),
            self.phi,
            self.paper_literal,
        ))
    }

    /// Numerical wavelength shift, the forward model used for calibration.
    pub fn numeric_delta_lambda(&self, scheme: SchemeKind, omega: f64) -> Result<f64> {
        let post = self.spectrum(scheme, omega)?;
        Ok(mean_shift_numeric(&post, &self.probe, self.lambda0)?.delta_lambda)
    }

    pub fn analytic_delta_lambda(&self, scheme: SchemeKind, omega: f64) -> Result<f64> {
        let g = self.coupling(omega)?.g;
        Ok(self.analytic_shift(scheme, g)?.delta_lambda)
    }

    fn analytic_shift(&self, scheme: SchemeKind, g: f64) -> Result<Shift> {
        mean_shift_analytic(
            scheme,
            g,
            &self.probe,
            self.phi,
            self.lambda0,
            self.delta_lambda,
            self.paper_literal,
        )
    }

    pub fn measure(&self, scheme: SchemeKind, omega: f64) -> Result<MeasurementResult> {
        let g = self.coupling(omega)?.g;
        let bias = self.bias_for(scheme);
        let post = postselected_spectrum(&self.probe, g, bias, self.phi, self.paper_literal);
        let jones = postselected_spectrum_jones(&self.probe, g, bias, self.phi, self.paper_literal);
        let numeric = mean_shift_numeric(&post, &self.probe, self.lambda0)?;
        let analytic = self.analytic_shift(scheme, g)?;
        Ok(MeasurementResult {
            scheme,
            delta_p_numeric: numeric.delta_p,
            delta_lambda_numeric: numeric.delta_lambda,
            delta_p_analytic: analytic.delta_p,
            delta_lambda_analytic: analytic.delta_lambda,
            postselect_prob_numeric: postselection_probability(&post),
            postselect_prob_pointform: postselection_probability_point(scheme, g, self.probe.p0(), self.phi),
            amplification_factor: self.amplification_factor(),
            jones_max_relative_deviation: max_relative_deviation(post.intensity(), jones.intensity()),
        })
    }
}

/// `(lambda0 / delta_lambda)^2`.
pub fn amplification_factor(lambda0: f64, delta_lambda: f64) -> f64 {
    (lambda0 / delta_lambda).powi(2)
}

/// Coupling length and post-selection angle seen by the probe.
fn phase_terms<T: Real>(g: T, bias: Option<&BiasConfig<T>>, phi: T, paper_literal: bool) -> (T, T) {
    match bias {
        None => (g, phi),
        // the simplified biased density sin^2(p g)
        Some(_) if paper_literal => (g, T::zero()),
        Some(b) => (g + b.psi_pre, phi),
    }
}

/// Unnormalized post-selected spectrum; its integral is the post-selection
/// probability.
///
/// Without bias the density is `sin^2(g p + phi) I(p)`. With bias it is
/// `sin^2(p (g + psi_pre) + phi) I(p)`, or `sin^2(p g) I(p)` when
/// `paper_literal` is set.
pub fn postselected_spectrum(
    probe: &ProbeSpectrum<f64>,
    g: f64,
    bias: Option<&BiasConfig<f64>>,
    phi: f64,
    paper_literal: bool,
) -> ProbeSpectrum<f64> {
    let (length, offset) = phase_terms(g, bias, phi, paper_literal);
    let intensity = probe
        .p_grid()
        .iter()
        .zip(probe.intensity())
        .map(|(&p, &i)| p.mul_add(length, offset).sin().powi(2) * i)
        .collect();
    probe.with_intensity(intensity)
}

/// The same spectrum as [`postselected_spectrum`], computed per node as
/// `|<post(beta)| exp(-i p L A) |pre>|^2` with the Jones algebra in
/// double-double precision.
pub fn postselected_spectrum_jones(
    probe: &ProbeSpectrum<f64>,
    g: f64,
    bias: Option<&BiasConfig<f64>>,
    phi: f64,
    paper_literal: bool,
) -> ProbeSpectrum<f64> {
    let (length, offset) = phase_terms(g, bias, phi, paper_literal);
    let length = DoubleDouble::lit(length);
    let pre = jones::preselection_state::<DoubleDouble>();
    let post = jones::postselection_state(DoubleDouble::lit(offset));
    let op = SystemOperator::<DoubleDouble>::which_path();
    let intensity = probe
        .p_grid()
        .iter()
        .zip(probe.intensity())
        .map(|(&p, &i)| {
            let u = jones::coupling_unitary(&op, DoubleDouble::lit(p) * length);
            jones::transition_amplitude(&post, &u, &pre).norm_sqr().to_f64_lossy() * i
        })
        .collect();
    probe.with_intensity(intensity)
}

/// `max_i |a_i - b_i| / max(|a_i|, |b_i|)`, counting nodes where both vanish as equal.
pub fn max_relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let scale = x.abs().max(y.abs());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// Trapezoidal integral of an unnormalized post-selected spectrum, clamped to `[0, 1]`.
pub fn postselection_probability(post: &ProbeSpectrum<f64>) -> f64 {
    post.total().clamp(0.0, 1.0)
}

/// Post-selection probability evaluated at the center momentum only:
/// `sin^2(g p0 + phi)` for SWM, `sin^2(g p0)` for BWM.
pub fn postselection_probability_point(scheme: SchemeKind, g: f64, p0: f64, phi: f64) -> f64 {
    match scheme {
        SchemeKind::Swm => g.mul_add(p0, phi).sin().powi(2),
        SchemeKind::Bwm => (g * p0).sin().powi(2),
    }
}

/// Shift of the post-selected mean momentum from the probe mean, and the
/// wavelength shift `-delta_p lambda0^2 / (2 pi)`.
pub fn mean_shift_numeric(post: &ProbeSpectrum<f64>, probe: &ProbeSpectrum<f64>, lambda0: f64) -> Result<Shift> {
    let after = spectrum::moments(post)?;
    let before = spectrum::moments(probe)?;
    let delta_p = after.mean_offset - before.mean_offset;
    Ok(Shift {
        delta_p,
        delta_lambda: -delta_p * lambda0 * lambda0 / TAU,
    })
}

/// Closed-form shifts.
///
/// SWM: `delta_p = 2 g sigma_p^2 cot(phi)`, `delta_lambda = 4 pi g cot(phi) (delta_lambda/lambda0)^2`.
/// BWM: `delta_p = 2 g p0^2 cot(phi)`, `delta_lambda = 4 pi g cot(phi)`.
/// With `paper_literal` the wavelength shifts use `1/phi` in place of `cot(phi)`.
pub fn mean_shift_analytic(
    scheme: SchemeKind,
    g: f64,
    probe: &ProbeSpectrum<f64>,
    phi: f64,
    lambda0: f64,
    delta_lambda: f64,
    paper_literal: bool,
) -> Result<Shift> {
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::PhiOutOfRange(phi));
    }
    let cot = 1.0 / phi.tan();
    let wavelength_cot = if paper_literal { 1.0 / phi } else { cot };
    Ok(match scheme {
        SchemeKind::Swm => Shift {
            delta_p: 2.0 * g * probe.sigma_p().powi(2) * cot,
            delta_lambda: 4.0 * PI * g * wavelength_cot * (delta_lambda / lambda0).powi(2),
        },
        SchemeKind::Bwm => Shift {
            delta_p: 2.0 * g * probe.p0().powi(2) * cot,
            delta_lambda: 4.0 * PI * g * wavelength_cot,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub omega_rad_per_s: f64,
    pub coupling: CouplingResult<f64>,
    pub swm: MeasurementResult,
    pub bwm: MeasurementResult,
}

impl Comparison {
    pub fn get(&self, scheme: SchemeKind) -> &MeasurementResult {
        match scheme {
            SchemeKind::Swm => &self.swm,
            SchemeKind::Bwm => &self.bwm,
        }
    }
}

/// Runs both schemes on the same probe and rotation rate.
pub fn compare_schemes(cfg: &ExperimentConfig) -> Result<Comparison> {
    let setup = Setup::from_config(cfg)?;
    let omega = cfg.omega_rad_per_s;
    Ok(Comparison {
        omega_rad_per_s: omega,
        coupling: setup.coupling(omega)?,
        swm: setup.measure(SchemeKind::Swm, omega)?,
        bwm: setup.measure(SchemeKind::Bwm, omega)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Mean momentum shift, 1/m.
    DeltaP,
    /// Mean wavelength shift, m.
    DeltaLambda,
    PostselectProb,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub scheme: SchemeKind,
    pub quantity: Quantity,
    pub numeric: f64,
    pub paper_analytic: f64,
    /// `(numeric - paper_analytic) / |paper_analytic|`; absent when the
    /// closed form is exactly zero.
    pub relative_difference: Option<f64>,
}

/// Numeric against closed-form values, three quantities per scheme.
pub fn discrepancy_rows(cmp: &Comparison) -> Vec<DiscrepancyRow> {
    let mut rows = Vec::with_capacity(6);
    for scheme in [SchemeKind::Swm, SchemeKind::Bwm] {
        let r = cmp.get(scheme);
        for (quantity, numeric, analytic) in [
            (Quantity::DeltaP, r.delta_p_numeric, r.delta_p_analytic),
            (Quantity::DeltaLambda, r.delta_lambda_numeric, r.delta_lambda_analytic),
            (
                Quantity::PostselectProb,
                r.postselect_prob_numeric,
                r.postselect_prob_pointform,
            ),
        ] {
            rows.push(DiscrepancyRow {
                scheme,
                quantity,
                numeric,
                paper_analytic: analytic,
                relative_difference: (analytic != 0.0).then(|| (numeric - analytic) / analytic.abs()),
            });
        }
    }
    rows
}

pub fn discrepancy_report(cfg: &ExperimentConfig) -> Result<Vec<DiscrepancyRow>> {
    Ok(discrepancy_rows(&compare_schemes(cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    /// Post-selection probability and mean shift of a Gaussian N(p0, s^2)
    /// weighted by sin^2(a p + b), integrated exactly over the real line:
    /// E[sin^2] = (1 - e^{-2 a^2 s^2} cos 2c) / 2 and, by Stein's lemma,
    /// E[(p - p0) sin^2] = s^2 a e^{-2 a^2 s^2} sin 2c, with c = a p0 + b.
    fn gaussian_oracle(a: f64, b: f64, p0: f64, s: f64) -> (f64, f64) {
        let c = a * p0 + b;
        let u = 2.0 * a * a * s * s;
        let damp = (-u).exp();
        // 1 - damp cos 2c, written without cancellation
        let prob = 0.5 * (-(-u).exp_m1() + 2.0 * damp * c.sin().powi(2));
        (prob, s * s * a * damp * (2.0 * c).sin() / prob)
    }

    fn nominal_setup(literal: bool) -> Setup {
        let mut cfg = ExperimentConfig::nominal(1e-9);
        cfg.paper_literal = literal;
        Setup::from_config(&cfg).unwrap()
    }

    #[test]
    fn zero_coupling_without_bias_scales_the_probe() {
        let s = nominal_setup(false);
        let post = postselected_spectrum(&s.probe, 0.0, None, s.phi, false);
        let k = s.phi.sin().powi(2);
        for (a, b) in post.intensity().iter().zip(s.probe.intensity()) {
            assert_relative_eq!(*a, k * b, max_relative = 1e-15);
        }
        assert_relative_eq!(postselection_probability(&post), 1e-8, max_relative = 1e-8);
        let shift = mean_shift_numeric(&post, &s.probe, s.lambda0).unwrap();
        assert!(shift.delta_p.abs() <= 1e-12 * s.probe.p0());
        assert!(shift.delta_lambda.abs() <= 1e-12 * s.lambda0);
    }

    #[test]
    fn zero_coupling_with_bias_is_dark_at_center() {
        let s = nominal_setup(false);
        let post = postselected_spectrum(&s.probe, 0.0, Some(&s.bias), s.phi, false);
        let p0 = s.probe.p0();
        for (i, (&p, &v)) in post.p_grid().iter().zip(post.intensity()).enumerate().step_by(250) {
            let oracle = (s.phi * (1.0 - p / p0)).sin().powi(2) * s.probe.intensity()[i];
            assert_relative_eq!(v, oracle, max_relative = 1e-6, epsilon = 1e-40);
        }
        let c = s.probe.center_index();
        assert!(post.intensity()[c] < 1e-20 * s.probe.peak());
    }

    #[test]
    fn closed_form_and_jones_paths_agree() {
        let s = nominal_setup(false);
        let g = s.coupling(1e-9).unwrap().g;
        for bias in [None, Some(&s.bias)] {
            let a = postselected_spectrum(&s.probe, g, bias, s.phi, false);
            let b = postselected_spectrum_jones(&s.probe, g, bias, s.phi, false);
            assert!(max_relative_deviation(a.intensity(), b.intensity()) < 1e-12);
        }
    }

    #[test]
    fn random_tuples_agree_nodewise() {
        let s = nominal_setup(false);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..6 {
            let g = rng.gen_range(-3e-13..3e-13);
            let phi: f64 = rng.gen_range(1e-5..1.5);
            let bias = BiasConfig {
                phi,
                order_m: 0,
                psi_pre: rng.gen_range(-1.5..1.5) * phi / s.probe.p0(),
            };
            let a = postselected_spectrum(&s.probe, g, Some(&bias), phi, false);
            let b = postselected_spectrum_jones(&s.probe, g, Some(&bias), phi, false);
            assert!(max_relative_deviation(a.intensity(), b.intensity()) < 1e-12);
        }
    }

    #[test]
    fn swm_spectrum_matches_gaussian_oracle() {
        let s = nominal_setup(false);
        let g = s.coupling(1e-9).unwrap().g;
        let post = postselected_spectrum(&s.probe, g, None, s.phi, false);
        let (prob, shift) = gaussian_oracle(g, s.phi, s.probe.p0(), s.probe.sigma_p());
        assert_relative_eq!(postselection_probability(&post), prob, max_relative = 1e-7);
        let numeric = mean_shift_numeric(&post, &s.probe, s.lambda0).unwrap();
        assert_relative_eq!(numeric.delta_p, shift, max_relative = 1e-6);
        assert_relative_eq!(
            numeric.delta_lambda,
            -numeric.delta_p * s.lambda0.powi(2) / TAU,
            max_relative = 1e-15
        );
        // the first-order closed form misses the O(g p0 / phi) correction:
        // exact shift = 2 g s^2 / (phi + g p0) to leading order
        let first_order = 2.0 * g * s.probe.sigma_p().powi(2) / s.phi.tan();
        let rel = (numeric.delta_p - first_order) / first_order;
        assert_relative_eq!(rel, -g * s.probe.p0() / (s.phi + g * s.probe.p0()), max_relative = 2e-3);
    }

    #[test]
    fn bwm_spectrum_matches_gaussian_oracle() {
        let s = nominal_setup(false);
        let g = s.coupling(1e-9).unwrap().g;
        let post = postselected_spectrum(&s.probe, g, Some(&s.bias), s.phi, false);
        let (prob, shift) = gaussian_oracle(g + s.bias.psi_pre, s.phi, s.probe.p0(), s.probe.sigma_p());
        assert_relative_eq!(postselection_probability(&post), prob, max_relative = 1e-6);
        let numeric = mean_shift_numeric(&post, &s.probe, s.lambda0).unwrap();
        assert_relative_eq!(numeric.delta_p, shift, max_relative = 1e-6);

        let literal = postselected_spectrum(&s.probe, g, Some(&s.bias), s.phi, true);
        let (prob, shift) = gaussian_oracle(g, 0.0, s.probe.p0(), s.probe.sigma_p());
        assert_relative_eq!(postselection_probability(&literal), prob, max_relative = 1e-6);
        let numeric = mean_shift_numeric(&literal, &s.probe, s.lambda0).unwrap();
        assert_relative_eq!(numeric.delta_p, shift, max_relative = 1e-6);
    }

    #[test]
    fn postselection_probabilities() {
        let s = nominal_setup(false);
        let g = s.coupling(1e-9).unwrap().g;
        let p0 = s.probe.p0();
        let swm_point = postselection_probability_point(SchemeKind::Swm, g, p0, s.phi);
        assert_relative_eq!(
            swm_point,
            (1.0064081738e-7f64 + 1e-4).sin().powi(2),
            max_relative = 1e-9
        );
        assert_relative_eq!(swm_point, 1.002e-8, max_relative = 1e-3);
        let swm = postselection_probability(&postselected_spectrum(&s.probe, g, None, s.phi, false));
        assert!((swm / swm_point - 1.0).abs() < 0.05);

        let bwm_point = postselection_probability_point(SchemeKind::Bwm, g, p0, s.phi);
        assert_relative_eq!(bwm_point, 1.013e-14, max_relative = 1e-3);
        let literal = postselection_probability(&postselected_spectrum(&s.probe, g, Some(&s.bias), s.phi, true));
        // small-angle Gaussian integral g^2 (p0^2 + s^2)
        assert_relative_eq!(
            literal,
            g * g * (p0 * p0 + s.probe.sigma_p().powi(2)),
            max_relative = 1e-6
        );
        assert!((literal / bwm_point - 1.0).abs() < 0.05);
        assert!(swm > literal);
    }

    #[test]
    fn analytic_shift_examples() {
        let s = nominal_setup(false);
        let g = s.coupling(1e-9).unwrap().g;
        let bwm = mean_shift_analytic(SchemeKind::Bwm, g, &s.probe, s.phi, s.lambda0, s.delta_lambda, true).unwrap();
        assert_relative_eq!(bwm.delta_lambda, 4.0 * PI * 1.33426e-14 / 1e-4, max_relative = 1e-5);
        assert_relative_eq!(bwm.delta_lambda, 1.6766e-9, max_relative = 1e-4);
        let swm = mean_shift_analytic(SchemeKind::Swm, g, &s.probe, s.phi, s.lambda0, s.delta_lambda, true).unwrap();
        assert_relative_eq!(
            swm.delta_lambda,
            bwm.delta_lambda * (20.0f64 / 833.0).powi(2),
            max_relative = 1e-12
        );
        assert_relative_eq!(swm.delta_lambda, 9.67e-13, max_relative = 1e-3);
        assert_relative_eq!(
            bwm.delta_lambda / swm.delta_lambda,
            (833.0f64 / 20.0).powi(2),
            max_relative = 1e-12
        );
        assert_relative_eq!((833.0f64 / 20.0).powi(2), 1734.7, max_relative = 1e-4);

        // cot(phi) against 1/phi differs by phi^2/3
        let default =
            mean_shift_analytic(SchemeKind::Bwm, g, &s.probe, s.phi, s.lambda0, s.delta_lambda, false).unwrap();
        assert_relative_eq!(
            default.delta_lambda / bwm.delta_lambda,
            1.0 - 1e-8 / 3.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            default.delta_p,
            2.0 * g * s.probe.p0().powi(2) / 1e-4f64.tan(),
            max_relative = 1e-15
        );

        for phi in [0.0, FRAC_PI_2, -0.1, 2.0] {
            assert!(matches!(
                mean_shift_analytic(SchemeKind::Swm, g, &s.probe, phi, s.lambda0, s.delta_lambda, false),
                Err(Error::PhiOutOfRange(_))
            ));
        }
    }

    #[test]
    fn compare_nominal_scenario() {
        let cmp = compare_schemes(&ExperimentConfig::nominal(1e-9)).unwrap();
        let ratio = cmp.bwm.delta_lambda_analytic / cmp.swm.delta_lambda_analytic;
        assert_relative_eq!(ratio, cmp.swm.amplification_factor, max_relative = 1e-12);
        assert!(cmp.swm.postselect_prob_pointform > cmp.bwm.postselect_prob_pointform);
        assert!(cmp.swm.postselect_prob_numeric > cmp.bwm.postselect_prob_numeric);
        for r in [&cmp.swm, &cmp.bwm] {
            assert!((0.0..=1.0).contains(&r.postselect_prob_numeric));
            assert!(r.amplification_factor > 1.0);
            assert!(r.jones_max_relative_deviation < 1e-12);
        }
    }

    #[test]
    fn sigma_reading_of_delta_lambda() {
        let mut cfg = ExperimentConfig::nominal(1e-9);
        cfg.delta_lambda_means = DeltaLambdaMeans::Sigma;
        let s = Setup::from_config(&cfg).unwrap();
        let sigma_nm = 20.0 / (2.0 * (2.0 * 2f64.ln()).sqrt());
        assert_relative_eq!(
            s.amplification_factor(),
            (833.0 / sigma_nm).powi(2),
            max_relative = 1e-12
        );
        assert_relative_eq!(s.amplification_factor(), 9620.0, max_relative = 1e-3);
        // in this reading the closed-form SWM wavelength shift is the
        // wavelength image of the closed-form momentum shift
        let g = s.coupling(1e-9).unwrap().g;
        let sh = mean_shift_analytic(SchemeKind::Swm, g, &s.probe, s.phi, s.lambda0, s.delta_lambda, false).unwrap();
        assert_relative_eq!(
            sh.delta_lambda,
            sh.delta_p * s.lambda0.powi(2) / TAU,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_rotation_gives_zero_numeric_shifts() {
        let cmp = compare_schemes(&ExperimentConfig::nominal(0.0)).unwrap();
        let p0 = TAU / 833e-9;
        assert!(cmp.swm.delta_p_numeric.abs() <= 1e-12 * p0);
        assert!(cmp.bwm.delta_p_numeric.abs() <= 1e-12 * p0);
    }

    #[test]
    fn rotation_direction_flips_the_shift() {
        let s = nominal_setup(false);
        for scheme in [SchemeKind::Swm, SchemeKind::Bwm] {
            let up = s.measure(scheme, 1e-9).unwrap().delta_p_numeric;
            let down = s.measure(scheme, -1e-9).unwrap().delta_p_numeric;
            assert!(up * down < 0.0, "{scheme}: {up} {down}");
        }
    }

    #[test]
    fn literal_bias_at_zero_rotation_is_fully_dark() {
        let mut cfg = ExperimentConfig::nominal(0.0);
        cfg.paper_literal = true;
        assert!(matches!(compare_schemes(&cfg), Err(Error::ZeroTotalIntensity)));
    }

    #[test]
    fn discrepancy_table_layout() {
        let rows = discrepancy_report(&ExperimentConfig::nominal(1e-9)).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows.iter().filter(|r| r.scheme == SchemeKind::Bwm).count(), 3);
        let swm_dp = &rows[0];
        assert_eq!((swm_dp.scheme, swm_dp.quantity), (SchemeKind::Swm, Quantity::DeltaP));
        // leading-order gap -g p0 / phi, about -1.0e-3 here
        assert_relative_eq!(swm_dp.relative_difference.unwrap(), -1.00547e-3, max_relative = 1e-3);
        let bwm_dp = &rows[3];
        assert_eq!((bwm_dp.scheme, bwm_dp.quantity), (SchemeKind::Bwm, Quantity::DeltaP));
        assert!(bwm_dp.relative_difference.is_some());

        let rows = discrepancy_report(&ExperimentConfig::nominal(0.0)).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].relative_difference, None);
    }
}
