//! Teleportation over the entangled microwave-optical output of a
//! blue-detuned transducer.

use gausslink::gaussian::apply_channel;
use gausslink::teleport::{induced_channel, optimize_gain, teleport_oracle};
use gausslink::transducer::{output_mo_covariance, DeviceSpec, Detuning};
use gausslink::GaussianState;

fn main() -> gausslink::Result<()> {
    let p = DeviceSpec::default().params(Detuning::Blue)?;
    let form = output_mo_covariance(&p, 0.0)?;
    println!("C_om = C_em = 1 source: (u, v, w) = ({:.3}, {:.3}, {:.3})", form.u, form.v, form.w);

    for kappa in [0.5, 1.0, 4.0 / 3.0, 2.0] {
        let ch = induced_channel(&form, kappa)?;
        println!("gain {kappa:.4}: {ch:?}, Q_LB = {:.4}", ch.q_lb());
    }

    let best = optimize_gain(&form)?;
    println!("optimal gain {:.4} gives Q_LB = {:.4}", best.kappa_opt, best.q_lb_opt);

    let input = GaussianState::thermal(0.5)?;
    let moved = teleport_oracle(&form.covariance(), input.cov(), best.kappa_opt)?;
    let expected = apply_channel(&input, &best.channel.spec())?;
    println!("teleported thermal state covariance:{moved:.5}");
    println!("channel prediction differs by {:.2e}", (moved - expected.cov()).amax());
    Ok(())
}
