use nalgebra::DMatrix;

use crate::entanglement::entanglement_of_formation;
use crate::gaussian::{apply_channel, physicality_margin, symplectic_eigenvalues, GaussianState};
use crate::channel::g_function;
use crate::random::{random_standard_form, random_stable_blue_params, random_state, seeded};
use crate::swapping::{apply_optical_loss, mm_swap_closed, mm_swap_homodyne, mm_swap_numeric, swapped_form};
use crate::teleport::{induced_channel, optimize_gain, teleport_oracle};
use crate::transducer::{output_mo_closed_form, output_mo_covariance, TwoModeStandardForm};

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst discrepancy observed.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, worst: f64, tol: f64) -> SelftestCheck {
    SelftestCheck {
        name,
        passed: worst.is_finite() && worst <= tol,
        worst,
    }
}

/// Runs the oracle-equivalence suites on draws from `seed`.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = seeded(seed);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = random_stable_blue_params(&mut rng);
        let gap = match (output_mo_covariance(&p, 0.0), output_mo_closed_form(&p)) {
            (Ok(a), Ok(b)) => rel_gap(&a, &b),
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
    }
    checks.push(check("closed-form output vs scattering", worst, 1e-9));

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let form = random_standard_form(&mut rng);
        let input = random_state(&mut rng, 1);
        let kappa = 0.3 + 2.0 * rand::Rng::gen::<f64>(&mut rng);
        let gap = match (teleport_oracle(&form.covariance(), input.cov(), kappa), induced_channel(&form, kappa)) {
            (Ok(out), Ok(ch)) => match apply_channel(&input, &ch.spec()) {
                Ok(expected) => (out - expected.cov()).amax(),
                Err(_) => f64::INFINITY,
            },
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
    }
    checks.push(check("teleportation oracle vs induced channel", worst, 1e-8));

    let (mut worst_limit, mut worst_dyne) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let form = random_standard_form(&mut rng);
        let Ok(closed) = mm_swap_closed(&form) else {
            worst_limit = f64::INFINITY;
            continue;
        };
        let scale = closed.amax().max(1.0);
        let rel = |m: crate::Result<DMatrix<f64>>| m.map_or(f64::INFINITY, |m| (m - &closed).amax() / scale);
        worst_limit = worst_limit.max(rel(mm_swap_homodyne(&form, &form)));
        worst_dyne = worst_dyne.max(rel(mm_swap_numeric(&form, &form, 10.0)));
    }
    checks.push(check("homodyne swap vs closed form", worst_limit, 1e-9));
    checks.push(check("general-dyne swap at r = 10 vs closed form", worst_dyne, 1e-4));

    let mut worst = 0.0f64;
    for s in [0.2, 0.5, 1.0] {
        let f = TwoModeStandardForm::tmsv(s);
        let reduced = DMatrix::identity(2, 2) * f.u;
        let entropy = symplectic_eigenvalues(&reduced)
            .ok()
            .and_then(|nu| g_function((nu[0] - 1.0) / 2.0).ok());
        let gap = match (entropy, entanglement_of_formation(&f)) {
            (Some(e), Ok(ef)) => (e - ef).abs(),
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
    }
    checks.push(check("entanglement of formation vs reduced entropy", worst, 1e-6));

    let mut worst = 0.0f64;
    for _ in 0..200 {
        worst = worst.max(pipeline_violation(&mut rng));
    }
    checks.push(check("physicality along source-loss-swap-teleport", worst, 1e-9));

    SelftestReport { seed, checks }
}

fn rel_gap(a: &TwoModeStandardForm, b: &TwoModeStandardForm) -> f64 {
    [(a.u, b.u), (a.v, b.v), (a.w, b.w)]
        .iter()
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Largest violation of `V + iΩ ⪰ 0` seen along one random pipeline.
pub(crate) fn pipeline_violation<R: rand::Rng>(rng: &mut R) -> f64 {
    let p = random_stable_blue_params(rng);
    let omega = rng.gen_range(-2.0..2.0);
    let tau = rng.gen_range(0.0..=1.0);
    let result = (|| -> crate::Result<Vec<DMatrix<f64>>> {
        let source = output_mo_covariance(&p, omega)?;
        let lossy = apply_optical_loss(&source, tau)?;
        let mm = swapped_form(&lossy)?;
        let input = random_state(rng, 1);
        let kappa = optimize_gain(&mm)?.kappa_opt;
        let out = teleport_oracle(&mm.covariance(), input.cov(), kappa)?;
        let via_channel = apply_channel(&input, &induced_channel(&mm, kappa)?.spec())?;
        Ok(vec![
            source.covariance(),
            lossy.covariance(),
            mm_swap_closed(&lossy)?,
            mm_swap_numeric(&lossy, &lossy, 3.0)?,
            out,
            via_channel.cov().clone(),
            GaussianState::from_cov(mm.covariance())?.cov().clone(),
        ])
    })();
    match result {
        Ok(covs) => covs
            .iter()
            .map(|c| (-physicality_margin(c)).max(0.0))
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_seed_passes() {
        let report = run_selftest(1);
        for c in &report.checks {
            assert!(c.passed, "{} worst {}", c.name, c.worst);
        }
        assert!(report.passed());
    }
}
