//! Seeded generators of random physical states, channels and devices, used
//! by the self-test and by property tests.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::{
    beam_splitter, embed_single_mode, embed_two_mode, min_hermitian_eigenvalue, omega, rotation,
    single_mode_squeezer, GaussianChannelSpec, GaussianState,
};
use crate::transducer::{stability_check, Detuning, DeviceSpec, TransducerParams, TwoModeStandardForm};

/// Deterministic generator for a given seed.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symplectic matrix built from local squeezers, rotations and beam
/// splitters.
pub fn random_symplectic<R: Rng>(rng: &mut R, n_modes: usize) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for _ in 0..2 {
        for i in 0..n_modes {
            let local = rotation(rng.gen_range(0.0..std::f64::consts::TAU))
                * single_mode_squeezer(rng.gen_range(-0.8..0.8));
            s = embed_single_mode(n_modes, i, &local) * s;
        }
        for i in 0..n_modes {
            for j in (i + 1)..n_modes {
                let bs = beam_splitter(rng.gen_range(0.0..std::f64::consts::PI));
                s = embed_two_mode(n_modes, i, j, &bs) * s;
            }
        }
    }
    s
}

/// Random physical state: a symplectic transform of thermal modes with
/// mean photon numbers up to 2, plus a random mean.
pub fn random_state<R: Rng>(rng: &mut R, n_modes: usize) -> GaussianState {
    let diag = DVector::from_fn(2 * n_modes, |_, _| 0.0);
    let mut thermal = DMatrix::from_diagonal(&diag);
    for i in 0..n_modes {
        let nu = 1.0 + 2.0 * rng.gen_range(0.0..2.0);
        thermal[(2 * i, 2 * i)] = nu;
        thermal[(2 * i + 1, 2 * i + 1)] = nu;
    }
    let s = random_symplectic(rng, n_modes);
    let cov = &s * thermal * s.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    let mean = DVector::from_fn(2 * n_modes, |_, _| rng.gen_range(-2.0..2.0));
    GaussianState::new_unchecked(mean, cov)
}

/// Random physical standard form: a two-mode squeezed pair of thermal modes
/// with independent loss on each arm.
pub fn random_standard_form<R: Rng>(rng: &mut R) -> TwoModeStandardForm {
    let n1: f64 = rng.gen_range(0.0..1.5);
    let n2: f64 = rng.gen_range(0.0..1.5);
    let r: f64 = rng.gen_range(0.0..1.5);
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let (a, b) = (2.0 * n1 + 1.0, 2.0 * n2 + 1.0);
    // TMS(r) acting on thermal(a) ⊗ thermal(b).
    let u = c * c * a + s * s * b;
    let v = s * s * a + c * c * b;
    let w = c * s * (a + b);
    let t1: f64 = rng.gen_range(0.05..1.0);
    let t2: f64 = rng.gen_range(0.05..1.0);
    TwoModeStandardForm::new_unchecked(
        t1 * (u - 1.0) + 1.0,
        t2 * (v - 1.0) + 1.0,
        (t1 * t2).sqrt() * w,
    )
}

/// Random CP channel on `n_modes` modes: arbitrary `T`, with `N` lifted
/// just enough to satisfy complete positivity.
pub fn random_channel<R: Rng>(rng: &mut R, n_modes: usize) -> GaussianChannelSpec {
    let dim = 2 * n_modes;
    let t = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.2..1.2));
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    let mut n = &g * g.transpose();
    let om = omega(n_modes);
    let im = &om - &t * &om * t.transpose();
    let lowest = min_hermitian_eigenvalue(&n, &im);
    let lift = (-lowest).max(0.0) + rng.gen_range(1e-3..0.5);
    for i in 0..dim {
        n[(i, i)] += lift;
    }
    GaussianChannelSpec {
        t,
        n,
        d: DVector::zeros(dim),
    }
}

/// Random device description with rates in `[0.5, 3]`, extraction ratios
/// in `[0.3, 1]` and `n_th` up to 2.
pub fn random_device<R: Rng>(rng: &mut R) -> DeviceSpec {
    DeviceSpec {
        c_om: rng.gen_range(0.0..5.0),
        c_em: rng.gen_range(0.0..8.0),
        zeta_o: rng.gen_range(0.3..=1.0),
        zeta_e: rng.gen_range(0.3..=1.0),
        n_th: rng.gen_range(0.0..2.0),
        kappa_o: rng.gen_range(0.5..3.0),
        kappa_e: rng.gen_range(0.5..3.0),
        kappa_m: rng.gen_range(0.5..3.0),
    }
}

/// Random red-detuned parameters.
pub fn random_red_params<R: Rng>(rng: &mut R) -> TransducerParams {
    random_device(rng)
        .params(Detuning::Red)
        .expect("sampled ranges are valid")
}

/// Random stable blue-detuned parameters, found by rejection.
pub fn random_stable_blue_params<R: Rng>(rng: &mut R) -> TransducerParams {
    loop {
        let mut spec = random_device(rng);
        spec.c_om = rng.gen_range(0.0..0.9) * (1.0 + spec.c_em);
        let p = spec.params(Detuning::Blue).expect("sampled ranges are valid");
        if stability_check(&p) {
            return p;
        }
    }
}
