//! Entanglement of formation and related measures for two-mode states in
//! standard form.

use std::f64::consts::PI;

use crate::channel::g_unchecked;
use crate::error::{Error, Result};
use crate::integrate::{trapezoid, Integral, Quadrature};
use crate::swapping::{apply_optical_loss, swapped_form};
use crate::transducer::{output_mo_covariance, TransducerParams, TwoModeStandardForm};
use crate::channel::default_frequency_cutoff;

/// Quantities entering the minimal anti-squeezing `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EofIntermediates {
    pub gamma: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
    /// `r = ¼ ln((γ − √(γ² − β₊β₋))/β₋)`; zero or negative means separable.
    pub r_min: f64,
}

/// `γ` and `β±` from the determinants of the covariance blocks.
pub fn eof_intermediates(form: &TwoModeStandardForm) -> EofIntermediates {
    let (u, v, w) = (form.u, form.v, form.w.abs());
    let det_a = u * u;
    let det_b = v * v;
    let det_c = -w * w;
    let det_v = (u * v - w * w).powi(2);
    let gamma = 2.0 * (det_v + 1.0) - (u - v).powi(2);
    let common = det_a + det_b - 2.0 * det_c + 2.0 * u * v + 2.0 * w * w;
    let cross = 4.0 * w * (u + v);
    finish(gamma, common + cross, common - cross)
}

/// Same quantities with `β± = (u + v ± 2w)²`, exact for standard form.
pub fn eof_intermediates_simplified(form: &TwoModeStandardForm) -> EofIntermediates {
    let (u, v, w) = (form.u, form.v, form.w.abs());
    let gamma = 2.0 * ((u * v - w * w).powi(2) + 1.0) - (u - v).powi(2);
    finish(gamma, (u + v + 2.0 * w).powi(2), (u + v - 2.0 * w).powi(2))
}

fn finish(gamma: f64, beta_plus: f64, beta_minus: f64) -> EofIntermediates {
    let rad = (gamma * gamma - beta_plus * beta_minus).max(0.0).sqrt();
    // (γ − √·)/β₋ rewritten as β₊/(γ + √·) to avoid cancellation.
    let arg = beta_plus / (gamma + rad);
    EofIntermediates {
        gamma,
        beta_plus,
        beta_minus,
        r_min: 0.25 * arg.ln(),
    }
}

/// Smallest symplectic eigenvalue of the partially transposed covariance.
/// Below one the state is entangled.
pub fn ppt_min_eigenvalue(form: &TwoModeStandardForm) -> f64 {
    let (u, v, w) = (form.u, form.v, form.w);
    let det_v = (u * v - w * w).powi(2);
    let delta = u * u + v * v + 2.0 * w * w;
    let disc = (delta * delta - 4.0 * det_v).max(0.0).sqrt();
    // ν₋² = (Δ − √(Δ² − 4detV))/2 = 2detV/(Δ + √·)
    (2.0 * det_v / (delta + disc)).sqrt()
}

/// Entanglement of formation in ebits:
/// `cosh²r log₂cosh²r − sinh²r log₂sinh²r`, which equals `g(sinh²r)`.
pub fn entanglement_of_formation(form: &TwoModeStandardForm) -> Result<f64> {
    if ppt_min_eigenvalue(form) >= 1.0 {
        return Ok(0.0);
    }
    let parts = eof_intermediates_simplified(form);
    if parts.beta_minus <= 0.0 {
        return Err(Error::EprSingular);
    }
    if parts.r_min <= 0.0 {
        return Ok(0.0);
    }
    Ok(g_unchecked(parts.r_min.sinh().powi(2)))
}

/// Duan quantity `u + v − 2w`; values below one certify entanglement.
pub fn duan_quantity(form: &TwoModeStandardForm) -> f64 {
    form.u + form.v - 2.0 * form.w
}

/// Entanglement-of-formation rate `(1/2π)∫ E_F(ω) dω` of the
/// microwave-microwave state heralded by homodyne swapping between two
/// copies of `p`, each optical arm with transmissivity `tau`.
pub fn entanglement_rate(p: &TransducerParams, tau: f64, policy: &Quadrature) -> Result<Integral> {
    rate(p, policy, |omega| {
        let form = apply_optical_loss(&output_mo_covariance(p, omega)?, tau)?;
        entanglement_of_formation(&swapped_form(&form)?)
    })
}

/// `(1/2π)∫ E_F(ω) dω` of the microwave-optical output of one device after
/// optical loss `tau`.
pub fn mo_entanglement_rate(p: &TransducerParams, tau: f64, policy: &Quadrature) -> Result<Integral> {
    rate(p, policy, |omega| {
        entanglement_of_formation(&apply_optical_loss(&output_mo_covariance(p, omega)?, tau)?)
    })
}

fn rate<F>(p: &TransducerParams, policy: &Quadrature, e_f: F) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let cutoff = default_frequency_cutoff(p);
    let mut out = trapezoid(e_f, -cutoff, cutoff, policy)?;
    out.value /= 2.0 * PI;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::symplectic_eigenvalues;
    use crate::transducer::{DeviceSpec, Detuning};
    use approx::assert_relative_eq;

    fn form(u: f64, v: f64, w: f64) -> TwoModeStandardForm {
        TwoModeStandardForm::new(u, v, w).unwrap()
    }

    #[test]
    fn product_state_has_none() {
        assert_eq!(entanglement_of_formation(&form(1.0, 1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(entanglement_of_formation(&form(3.0, 2.0, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn worked_source_value() {
        let f = form(17.0, 9.0, 12.0);
        let parts = eof_intermediates_simplified(&f);
        assert_eq!(parts.gamma, 100.0);
        assert_eq!(parts.beta_plus, 2500.0);
        assert_eq!(parts.beta_minus, 4.0);
        assert_relative_eq!(parts.r_min, 0.25 * 25f64.ln(), epsilon = 1e-15);
        let expected = 1.8 * 1.8f64.log2() - 0.8 * 0.8f64.log2();
        let e_f = entanglement_of_formation(&f).unwrap();
        assert_relative_eq!(e_f, expected, epsilon = 1e-12);
        assert!((e_f - 1.7844).abs() < 1e-3);
    }

    #[test]
    fn general_and_simplified_paths_agree() {
        for &(u, v, w) in &[(17.0, 9.0, 12.0), (3.0, 2.0, 1.8), (1.2, 5.0, 0.4)] {
            let a = eof_intermediates(&form(u, v, w));
            let b = eof_intermediates_simplified(&form(u, v, w));
            assert_relative_eq!(a.beta_plus, b.beta_plus, max_relative = 1e-12);
            assert_relative_eq!(a.beta_minus, b.beta_minus, max_relative = 1e-12);
        }
    }

    #[test]
    fn tmsv_matches_reduced_entropy() {
        for s in [0.2, 0.5, 1.0] {
            let f = TwoModeStandardForm::tmsv(s);
            let nu = symplectic_eigenvalues(&(nalgebra::DMatrix::identity(2, 2) * f.u)).unwrap()[0];
            let entropy = g_unchecked((nu - 1.0) / 2.0);
            assert_relative_eq!(entanglement_of_formation(&f).unwrap(), entropy, epsilon = 1e-6);
        }
    }

    #[test]
    fn duan_examples() {
        assert_eq!(duan_quantity(&form(1.0, 1.0, 0.0)), 2.0);
        let t = TwoModeStandardForm::tmsv(1.0);
        assert_relative_eq!(duan_quantity(&t), 2.0 * (-2.0f64).exp(), epsilon = 1e-14);
        assert_eq!(duan_quantity(&form(17.0, 9.0, 12.0)), 2.0);
    }

    #[test]
    fn ppt_closed_form_matches_spectrum() {
        let f = form(17.0, 9.0, 12.0);
        let mut pt = f.covariance();
        for k in 0..4 {
            pt[(3, k)] = -pt[(3, k)];
            pt[(k, 3)] = -pt[(k, 3)];
        }
        pt[(3, 3)] = f.v;
        let spec = symplectic_eigenvalues(&pt).unwrap();
        assert_relative_eq!(ppt_min_eigenvalue(&f), spec[0], epsilon = 1e-9);
    }

    #[test]
    fn epr_singular_is_reported() {
        let f = TwoModeStandardForm::new_unchecked(2.0, 2.0, 2.0);
        assert!(matches!(entanglement_of_formation(&f), Err(Error::EprSingular)));
    }

    #[test]
    fn phase_flip_invariance() {
        let a = TwoModeStandardForm::new_unchecked(4.0, 3.0, 3.2);
        let b = TwoModeStandardForm::new_unchecked(4.0, 3.0, -3.2);
        assert_eq!(
            entanglement_of_formation(&a).unwrap(),
            entanglement_of_formation(&b).unwrap()
        );
    }

    #[test]
    fn rate_vanishes_without_coupling_or_transmission() {
        let q = Quadrature::default();
        let p = DeviceSpec {
            c_om: 0.0,
            c_em: 2.0,
            ..DeviceSpec::default()
        }
        .params(Detuning::Blue)
        .unwrap();
        assert_eq!(entanglement_rate(&p, 1.0, &q).unwrap().value, 0.0);
        let p = DeviceSpec {
            c_om: 2.0,
            c_em: 4.0,
            ..DeviceSpec::default()
        }
        .params(Detuning::Blue)
        .unwrap();
        assert_eq!(entanglement_rate(&p, 0.0, &q).unwrap().value, 0.0);
        assert!(entanglement_rate(&p, 1.0, &q).unwrap().value > 0.0);
    }
}
