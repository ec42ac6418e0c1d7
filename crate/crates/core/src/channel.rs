//! Quantum-capacity lower bounds for single-mode bosonic channels.

use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianChannelSpec;
use crate::integrate::{trapezoid, Integral, Quadrature};
use crate::transducer::{dqt_channel, Detuning, TransducerParams};

/// Tolerance on `|η − 1|` separating loss/amplification from displacement.
pub const UNIT_GAIN_TOL: f64 = 1e-9;

/// The three phase-insensitive single-mode Gaussian channel families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BosonicChannel {
    /// `η < 1`, environment with `n_e` thermal photons.
    ThermalLoss { eta: f64, n_e: f64 },
    /// `η > 1`, environment with `n_e` thermal photons.
    ThermalAmplification { eta: f64, n_e: f64 },
    /// Unit gain with additive noise of variance `sigma_sq`.
    RandomDisplacement { sigma_sq: f64 },
}

impl BosonicChannel {
    pub fn thermal_loss(eta: f64, n_e: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0 - UNIT_GAIN_TOL) {
            return Err(invalid("eta", format!("loss needs 0 < η < 1, got {eta}")));
        }
        check_noise(n_e)?;
        Ok(Self::ThermalLoss { eta, n_e })
    }

    pub fn thermal_amplification(eta: f64, n_e: f64) -> Result<Self> {
        if !(eta > 1.0 + UNIT_GAIN_TOL) {
            return Err(invalid("eta", format!("amplification needs η > 1, got {eta}")));
        }
        check_noise(n_e)?;
        Ok(Self::ThermalAmplification { eta, n_e })
    }

    pub fn random_displacement(sigma_sq: f64) -> Result<Self> {
        if !(sigma_sq >= 0.0) {
            return Err(invalid("sigma_sq", format!("must be non-negative, got {sigma_sq}")));
        }
        Ok(Self::RandomDisplacement { sigma_sq })
    }

    /// Transmissivity or gain.
    pub fn eta(&self) -> f64 {
        match *self {
            Self::ThermalLoss { eta, .. } | Self::ThermalAmplification { eta, .. } => eta,
            Self::RandomDisplacement { .. } => 1.0,
        }
    }

    /// `(T, N)` acting on covariance matrices.
    pub fn spec(&self) -> GaussianChannelSpec {
        match *self {
            Self::ThermalLoss { eta, n_e } => {
                GaussianChannelSpec::isotropic(eta.sqrt(), (1.0 - eta) * (2.0 * n_e + 1.0))
            }
            Self::ThermalAmplification { eta, n_e } => {
                GaussianChannelSpec::isotropic(eta.sqrt(), (eta - 1.0) * (2.0 * n_e + 1.0))
            }
            Self::RandomDisplacement { sigma_sq } => GaussianChannelSpec::isotropic(1.0, sigma_sq),
        }
    }

    /// Capacity lower bound in bits per use, clamped at zero.
    pub fn q_lb(&self) -> f64 {
        self.q_lb_unclamped().max(0.0)
    }

    /// The same bound before clamping; negative values measure how far the
    /// channel is from transmitting.
    pub fn q_lb_unclamped(&self) -> f64 {
        match *self {
            Self::ThermalLoss { eta, n_e } | Self::ThermalAmplification { eta, n_e } => {
                coherent_info_loss_amp(eta, n_e)
            }
            Self::RandomDisplacement { sigma_sq } => gkp_rate(sigma_sq),
        }
    }
}

fn check_noise(n_e: f64) -> Result<()> {
    if !(n_e >= 0.0) {
        return Err(invalid("n_e", format!("must be non-negative, got {n_e}")));
    }
    Ok(())
}

/// Entropy of a thermal state, `g(x) = (x+1)log₂(x+1) − x log₂x`.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", format!("mean photon number must be non-negative, got {x}")));
    }
    Ok(g_unchecked(x))
}

pub(crate) fn g_unchecked(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

fn coherent_info_loss_amp(eta: f64, n_e: f64) -> f64 {
    (eta / (1.0 - eta).abs()).log2() - g_unchecked(n_e)
}

fn gkp_rate(sigma_sq: f64) -> f64 {
    (2.0 / (std::f64::consts::E * sigma_sq)).log2()
}

/// `max{0, log₂(η/|1−η|) − g(n_e)}` for thermal loss (η < 1) or thermal
/// amplification (η > 1).
pub fn q_lb_loss_amp(eta: f64, n_e: f64) -> Result<f64> {
    Ok(q_lb_loss_amp_unclamped(eta, n_e)?.max(0.0))
}

pub fn q_lb_loss_amp_unclamped(eta: f64, n_e: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(invalid("eta", format!("must be positive, got {eta}")));
    }
    if (eta - 1.0).abs() < UNIT_GAIN_TOL {
        return Err(invalid("eta", "unit gain: use the displacement bound"));
    }
    check_noise(n_e)?;
    Ok(coherent_info_loss_amp(eta, n_e))
}

/// GKP-achievable rate `max{0, log₂(2/(eσ²))}` for random displacements.
pub fn q_lb_displacement(sigma_sq: f64) -> Result<f64> {
    Ok(q_lb_displacement_unclamped(sigma_sq)?.max(0.0))
}

pub fn q_lb_displacement_unclamped(sigma_sq: f64) -> Result<f64> {
    if !(sigma_sq > 0.0) {
        return Err(invalid("sigma_sq", "must be positive (zero noise has no finite bound)"));
    }
    Ok(gkp_rate(sigma_sq))
}

/// Smallest `C_om·C_em` for which direct conversion can exceed η = ½:
/// `(1/(2√(2ζ_oζ_e) − 2))²`.
///
/// Fails with [`Error::BoundaryUnreachable`] when `ζ_oζ_e ≤ ½`, where no
/// cooperativity gives positive capacity.
pub fn dqt_capacity_boundary(zeta_o: f64, zeta_e: f64) -> Result<f64> {
    for (name, z) in [("zeta_o", zeta_o), ("zeta_e", zeta_e)] {
        if !(z > 0.0 && z <= 1.0) {
            return Err(invalid(name, format!("extraction ratio {z} outside (0, 1]")));
        }
    }
    let prod = zeta_o * zeta_e;
    let denom = 2.0 * (2.0 * prod).sqrt() - 2.0;
    if denom <= 0.0 {
        return Err(Error::BoundaryUnreachable(prod));
    }
    Ok((1.0 / denom).powi(2))
}

/// Capacity bound of direct conversion at detuning `omega`, clamped.
pub fn dqt_q_lb(p: &TransducerParams, omega: f64) -> Result<f64> {
    let ch = dqt_channel(p, omega)?;
    if ch.eta <= 0.5 {
        return Ok(0.0);
    }
    q_lb_loss_amp(ch.eta, ch.n_e)
}

/// Default integration half-width: ten times the widest linewidth.
pub fn default_frequency_cutoff(p: &TransducerParams) -> f64 {
    10.0 * p.kappa_o().max(p.kappa_e()).max(p.kappa_m)
}

/// `∫ Q_LB(ω) dω` over `[−Ω, Ω]`, `Ω = 10·max(κ_o, κ_e, κ_m)`.
///
/// Has units of the rates times bits per use.
pub fn q_lb_bandwidth_integrated(p: &TransducerParams, policy: &Quadrature) -> Result<Integral> {
    q_lb_bandwidth_integrated_over(p, -default_frequency_cutoff(p), default_frequency_cutoff(p), policy)
}

/// As [`q_lb_bandwidth_integrated`] over an explicit frequency window.
pub fn q_lb_bandwidth_integrated_over(
    p: &TransducerParams,
    lo: f64,
    hi: f64,
    policy: &Quadrature,
) -> Result<Integral> {
    if p.detuning != Detuning::Red {
        return Err(invalid("detuning", "bandwidth capacity needs a red-detuned device"));
    }
    trapezoid(|w| dqt_q_lb(p, w), lo, hi, policy)
}
