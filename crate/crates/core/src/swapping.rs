//! Microwave-microwave entanglement from two transducers by swapping on
//! their optical outputs, plus the click-heralded rate model.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::channel::default_frequency_cutoff;
use crate::error::{invalid, Error, Result};
use crate::gaussian::{direct_sum, general_dyne_condition, homodyne_epr_limit, tmsv_cov, GaussianState};
use crate::integrate::{trapezoid, Quadrature};
use crate::teleport::{optimize_gain, GainSearchResult};
use crate::transducer::{
    output_mo_covariance, output_mo_covariance_matrix, stability_check, Detuning, TransducerParams,
    TwoModeStandardForm,
};

/// Two transducers whose optical outputs travel through lossy paths to a
/// middle station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapSetup {
    pub device_1: TransducerParams,
    pub device_2: TransducerParams,
    /// Transmissivity of each optical path.
    pub tau: f64,
    /// Pulse duration `Δt` of the click scheme.
    pub pulse_duration: f64,
}

impl SwapSetup {
    pub fn new(device_1: TransducerParams, device_2: TransducerParams, tau: f64, pulse_duration: f64) -> Result<Self> {
        for p in [&device_1, &device_2] {
            p.validate()?;
            if p.detuning != Detuning::Blue {
                return Err(invalid("detuning", "swapping needs blue-detuned devices"));
            }
            if !stability_check(p) {
                return Err(Error::Unstable(crate::transducer::max_growth_rate(p)));
            }
        }
        check_tau(tau)?;
        if !(pulse_duration > 0.0) {
            return Err(invalid("pulse_duration", format!("must be positive, got {pulse_duration}")));
        }
        Ok(Self {
            device_1,
            device_2,
            tau,
            pulse_duration,
        })
    }

    /// Microwave-microwave covariance at detuning `omega` after an ideal
    /// EPR projection of the two lossy optical outputs.
    pub fn mm_covariance(&self, omega: f64) -> Result<DMatrix<f64>> {
        let f1 = apply_optical_loss(&output_mo_covariance(&self.device_1, omega)?, self.tau)?;
        let f2 = apply_optical_loss(&output_mo_covariance(&self.device_2, omega)?, self.tau)?;
        mm_swap_homodyne(&f1, &f2)
    }

    /// Click-scheme rates of the first device.
    pub fn click_rates(&self, policy: &Quadrature) -> Result<ClickRates> {
        click_rate(&self.device_1, self.tau, self.pulse_duration, policy)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(invalid("tau", format!("transmissivity {tau} outside [0, 1]")));
    }
    Ok(())
}

/// Standard form of the swapped state for identical devices:
/// `u' = v' = v − w²/2u`, `w' = w²/2u`.
pub fn swapped_form(form: &TwoModeStandardForm) -> Result<TwoModeStandardForm> {
    if !(form.u > 0.0) {
        return Err(invalid("u", format!("must be positive, got {}", form.u)));
    }
    let shared = form.w * form.w / (2.0 * form.u);
    Ok(TwoModeStandardForm::new_unchecked(form.v - shared, form.v - shared, shared))
}

/// Microwave-microwave covariance after swapping two copies of `form`.
pub fn mm_swap_closed(form: &TwoModeStandardForm) -> Result<DMatrix<f64>> {
    Ok(swapped_form(form)?.covariance())
}

fn source_pair(form1: &TwoModeStandardForm, form2: &TwoModeStandardForm) -> Result<GaussianState> {
    // Mode order after the direct sum: optical 1, microwave 1, optical 2, microwave 2.
    GaussianState::from_cov(direct_sum(&form1.covariance(), &form2.covariance()))
}

/// General-dyne swap with a TMSV(`r`) seed on the optical pair. Returns
/// the covariance of the two microwave modes.
pub fn mm_swap_numeric(form1: &TwoModeStandardForm, form2: &TwoModeStandardForm, r: f64) -> Result<DMatrix<f64>> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid("r", format!("measurement squeezing must be finite and non-negative, got {r}")));
    }
    let state = source_pair(form1, form2)?;
    let out = general_dyne_condition(&state, &[0, 2], &tmsv_cov(r), &DVector::zeros(4))?;
    Ok(out.state.cov().clone())
}

/// Ideal EPR projection of the optical pair, the `r → ∞` limit of
/// [`mm_swap_numeric`]. The two forms may differ.
pub fn mm_swap_homodyne(form1: &TwoModeStandardForm, form2: &TwoModeStandardForm) -> Result<DMatrix<f64>> {
    let state = source_pair(form1, form2)?;
    Ok(homodyne_epr_limit(&state, (0, 2))?.cov().clone())
}

/// Optical path loss `u → τ(u−1)+1`, `w → √τ·w`.
pub fn apply_optical_loss(form: &TwoModeStandardForm, tau: f64) -> Result<TwoModeStandardForm> {
    check_tau(tau)?;
    Ok(TwoModeStandardForm::new_unchecked(
        tau * (form.u - 1.0) + 1.0,
        form.v,
        tau.sqrt() * form.w,
    ))
}

/// Mean optical output photon number per unit bandwidth at `omega`,
/// `(S_qq + S_pp − 2)/4`. Exactly zero without optomechanical coupling.
pub fn photon_flux_density(p: &TransducerParams, omega: f64) -> Result<f64> {
    if p.g_om == 0.0 {
        p.validate()?;
        return Ok(0.0);
    }
    let cov = output_mo_covariance_matrix(p, omega)?;
    Ok(((cov[(0, 0)] + cov[(1, 1)] - 2.0) / 4.0).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickRates {
    /// Optical photon rate reaching the detector.
    pub r_t: f64,
    /// Heralded Bell-pair rate `2 r_t e^{−r_t Δt}`.
    pub r_b: f64,
}

/// Poisson approximation to the heralded Bell-pair rate.
pub fn bell_rate(r_t: f64, dt: f64) -> f64 {
    2.0 * r_t * (-r_t * dt).exp()
}

/// `r_t = (τ/2π)∫ photon_flux_density dω` and the resulting Bell rate.
pub fn click_rate(p: &TransducerParams, tau: f64, dt: f64, policy: &Quadrature) -> Result<ClickRates> {
    check_tau(tau)?;
    if !(dt > 0.0) {
        return Err(invalid("dt", format!("pulse duration must be positive, got {dt}")));
    }
    let cutoff = default_frequency_cutoff(p);
    let flux = trapezoid(|w| photon_flux_density(p, w), -cutoff, cutoff, policy)?;
    let r_t = tau * flux.value / (2.0 * PI);
    Ok(ClickRates {
        r_t,
        r_b: bell_rate(r_t, dt),
    })
}

/// Best teleportation capacity bound over a swapped microwave-microwave
/// resource in standard form.
pub fn mm_capacity(form_mm: &TwoModeStandardForm) -> Result<GainSearchResult> {
    optimize_gain(form_mm)
}
