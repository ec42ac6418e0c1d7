//! Continuous-variable teleportation of a microwave input over a shared
//! microwave-optical resource, and the single-mode channel it induces.

use nalgebra::DMatrix;

use crate::channel::{BosonicChannel, UNIT_GAIN_TOL};
use crate::error::{invalid, Error, Result};
use crate::gaussian::{direct_sum, homodyne_condition, physicality_margin, GaussianState, PSD_FLOOR};
use crate::transducer::TwoModeStandardForm;

/// Channel `V_in → κ²V_in + N` induced by teleporting with gain `kappa`,
/// where `N = vκ² + u − 2wκ`.
///
/// The result is thermal loss for `κ < 1`, thermal amplification for
/// `κ > 1` and a random displacement with `σ² = u + v − 2w` at unit gain.
pub fn induced_channel(form: &TwoModeStandardForm, kappa: f64) -> Result<BosonicChannel> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(invalid("kappa", format!("gain must be positive, got {kappa}")));
    }
    let noise = added_noise(form, kappa);
    let eta = kappa * kappa;
    if (eta - 1.0).abs() < UNIT_GAIN_TOL {
        return BosonicChannel::random_displacement(noise.max(0.0));
    }
    let n_e = noise / (2.0 * (1.0 - eta).abs()) - 0.5;
    if n_e < -1e-9 {
        return Err(Error::NotPhysical(n_e));
    }
    if eta < 1.0 {
        BosonicChannel::thermal_loss(eta, n_e.max(0.0))
    } else {
        BosonicChannel::thermal_amplification(eta, n_e.max(0.0))
    }
}

fn added_noise(form: &TwoModeStandardForm, kappa: f64) -> f64 {
    form.v * kappa * kappa + form.u - 2.0 * form.w * kappa
}

/// Search window and tolerance for [`optimize_gain_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSearch {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub tol: f64,
}

impl Default for GainSearch {
    fn default() -> Self {
        Self {
            lo: 1e-3,
            hi: 10.0,
            grid_points: 400,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSearchResult {
    pub kappa_opt: f64,
    /// Best capacity bound, clamped at zero.
    pub q_lb_opt: f64,
    pub channel: BosonicChannel,
}

/// Maximizes the capacity bound of the induced channel over the gain.
pub fn optimize_gain(form: &TwoModeStandardForm) -> Result<GainSearchResult> {
    optimize_gain_with(form, &GainSearch::default())
}

/// Log-spaced grid over `[lo, hi]` seeded with `κ = w/v` and `κ = 1`,
/// followed by golden-section refinement around the best candidate.
pub fn optimize_gain_with(form: &TwoModeStandardForm, search: &GainSearch) -> Result<GainSearchResult> {
    if !(search.lo > 0.0 && search.hi > search.lo && search.grid_points >= 3 && search.tol > 0.0) {
        return Err(invalid("search", "need 0 < lo < hi, at least 3 points and tol > 0"));
    }
    let objective = |k: f64| match induced_channel(form, k) {
        Ok(ch) => ch.q_lb_unclamped(),
        Err(_) => f64::NEG_INFINITY,
    };

    let ratio = (search.hi / search.lo).ln();
    let steps = (search.grid_points - 1) as f64;
    let mut nodes: Vec<f64> = (0..search.grid_points)
        .map(|i| search.lo * (ratio * i as f64 / steps).exp())
        .collect();
    for seed in [form.w / form.v, 1.0] {
        if seed > search.lo && seed < search.hi {
            nodes.push(seed);
        }
    }
    nodes.sort_by(f64::total_cmp);
    let values: Vec<f64> = nodes.iter().map(|&k| objective(k)).collect();
    let best = (0..nodes.len())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    if !values[best].is_finite() {
        return Err(Error::Numerical("no gain gives a physical channel".into()));
    }

    let mut a = nodes[best.saturating_sub(1)];
    let mut b = nodes[(best + 1).min(nodes.len() - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while (b - a).abs() > search.tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let refined = 0.5 * (a + b);
    let (kappa_opt, q) = if objective(refined) > values[best] {
        (refined, objective(refined))
    } else {
        (nodes[best], values[best])
    };
    Ok(GainSearchResult {
        kappa_opt,
        q_lb_opt: q.max(0.0),
        channel: induced_channel(form, kappa_opt)?,
    })
}

/// Explicit Gaussian simulation of the protocol for a single-mode input.
///
/// `v_oe` is the resource covariance in mode order (optical, microwave) and
/// `v_in` the 2×2 input covariance. The microwave half and the input meet on
/// a balanced beam splitter, `q` and `p` of the two outputs are homodyned and
/// the outcomes are fed forward to the optical mode with gain `kappa`.
/// Returns the 2×2 covariance of the optical output, averaged over outcomes.
pub fn teleport_oracle(v_oe: &DMatrix<f64>, v_in: &DMatrix<f64>, kappa: f64) -> Result<DMatrix<f64>> {
    if v_oe.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: v_oe.nrows(),
        });
    }
    if v_in.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: v_in.nrows(),
        });
    }
    for cov in [v_oe, v_in] {
        let margin = physicality_margin(cov);
        if margin < PSD_FLOOR {
            return Err(Error::NotPhysical(margin));
        }
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut mix = DMatrix::<f64>::identity(6, 6);
    for k in 0..2 {
        let (e, i) = (2 + k, 4 + k);
        mix[(e, e)] = -h;
        mix[(e, i)] = h;
        mix[(i, e)] = -h;
        mix[(i, i)] = -h;
    }
    let cov = &mix * direct_sum(v_oe, v_in) * mix.transpose();
    let state = GaussianState::from_cov(cov)?;

    let mut dirs = DMatrix::zeros(6, 2);
    dirs[(2, 0)] = 1.0;
    dirs[(5, 1)] = 1.0;
    let record = homodyne_condition(&state, &dirs, &[0])?;

    let s = std::f64::consts::SQRT_2 * kappa;
    let feed = DMatrix::from_row_slice(2, 2, &[s, 0.0, 0.0, -s]);
    let total = &record.gain + feed;
    Ok(record.state.cov() + &total * &record.outcome_cov * total.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::q_lb_loss_amp;
    use approx::assert_relative_eq;

    fn worked() -> TwoModeStandardForm {
        TwoModeStandardForm::new(17.0, 9.0, 12.0).unwrap()
    }

    #[test]
    fn induced_channel_at_ratio_gain() {
        let ch = induced_channel(&worked(), 4.0 / 3.0).unwrap();
        match ch {
            BosonicChannel::ThermalAmplification { eta, n_e } => {
                assert_relative_eq!(eta, 16.0 / 9.0, epsilon = 1e-14);
                assert_relative_eq!(n_e, 1.0 / 7.0, epsilon = 1e-13);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!((ch.q_lb() - 0.5714).abs() < 1e-3);
    }

    #[test]
    fn unit_gain_is_displacement() {
        let ch = induced_channel(&worked(), 1.0).unwrap();
        assert_eq!(ch, BosonicChannel::RandomDisplacement { sigma_sq: 2.0 });
        assert_eq!(ch.q_lb(), 0.0);
    }

    #[test]
    fn optimum_beats_seeds() {
        let res = optimize_gain(&worked()).unwrap();
        let at_ratio = q_lb_loss_amp(16.0 / 9.0, 1.0 / 7.0).unwrap();
        assert!(res.q_lb_opt >= at_ratio);
        assert!((res.q_lb_opt - 0.8662).abs() < 1e-3);
        assert!((res.kappa_opt - 1.472).abs() < 1e-2);
    }

    #[test]
    fn vacuum_resource_has_no_capacity() {
        let form = TwoModeStandardForm::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(optimize_gain(&form).unwrap().q_lb_opt, 0.0);
    }

    #[test]
    fn oracle_matches_closed_form() {
        let form = worked();
        let v_in = DMatrix::from_diagonal(&nalgebra::dvector![3.0, 0.5]);
        for kappa in [0.6, 1.0, 4.0 / 3.0] {
            let out = teleport_oracle(&form.covariance(), &v_in, kappa).unwrap();
            let spec = induced_channel(&form, kappa).unwrap().spec();
            let expected = &spec.t * &v_in * spec.t.transpose() + &spec.n;
            assert!((out - expected).amax() < 1e-9);
        }
    }

    #[test]
    fn oracle_rejects_bad_shapes() {
        let v = DMatrix::identity(2, 2);
        assert!(teleport_oracle(&v, &v, 1.0).is_err());
    }
}
