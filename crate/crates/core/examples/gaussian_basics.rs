//! Phase-space building blocks: states, channels, symplectic spectra and
//! measurement back-action.
//!
//! Run with `cargo run --example gaussian_basics`.

use gausslink::gaussian::{
    apply_channel, beam_splitter, embed_two_mode, extract_modes, general_dyne_condition, homodyne_epr_limit,
    symplectic_eigenvalues, tensor, GaussianChannelSpec, GaussianState,
};
use nalgebra::{DMatrix, DVector};

fn main() -> gausslink::Result<()> {
    let tmsv = GaussianState::tmsv(0.5);
    println!("TMSV(r = 0.5) covariance:{:.4}", tmsv.cov());

    let marginal = extract_modes(&tmsv, &[0])?;
    let nu = symplectic_eigenvalues(marginal.cov())?;
    println!("marginal symplectic eigenvalue {:.6} (cosh 1 = {:.6})", nu[0], 1f64.cosh());

    let loss = GaussianChannelSpec::isotropic(0.7f64.sqrt(), 0.3);
    let mut two_mode = GaussianChannelSpec::identity(2);
    two_mode.t.view_mut((0, 0), (2, 2)).copy_from(&loss.t);
    two_mode.n.view_mut((0, 0), (2, 2)).copy_from(&loss.n);
    let lossy = apply_channel(&tmsv, &two_mode)?;
    println!("after 30% loss on mode 0, physicality margin {:.3e}", lossy.physicality_margin());

    let thermal = GaussianState::thermal(0.4)?;
    let mixed = tensor(&lossy, &thermal);
    let bs = GaussianChannelSpec::new(embed_two_mode(3, 1, 2, &beam_splitter(std::f64::consts::FRAC_PI_4)), DMatrix::zeros(6, 6))?;
    let mixed = apply_channel(&mixed, &bs)?;

    let heterodyne = general_dyne_condition(&mixed, &[2], &DMatrix::identity(2, 2), &DVector::from_vec(vec![0.3, -0.1]))?;
    println!("heterodyne on mode 2 leaves modes 0, 1 with covariance:{:.4}", heterodyne.state.cov());
    println!("outcome density {:.4e}", heterodyne.density);

    let epr = homodyne_epr_limit(&mixed, (1, 2))?;
    println!("ideal EPR projection of modes 1, 2 leaves mode 0 with covariance:{:.4}", epr.cov());
    Ok(())
}
