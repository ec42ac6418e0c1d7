//! Direct microwave-to-optical conversion with a red-detuned transducer.
//!
//! Prints the conversion channel on resonance, the cooperativity product
//! needed for positive capacity, and the bandwidth-integrated bound.

use gausslink::channel::{dqt_capacity_boundary, dqt_q_lb, q_lb_bandwidth_integrated};
use gausslink::integrate::Quadrature;
use gausslink::transducer::{dqt_channel, DeviceSpec, Detuning};

fn main() -> gausslink::Result<()> {
    let boundary = dqt_capacity_boundary(0.9, 0.95)?;
    println!("zeta_o = 0.9, zeta_e = 0.95: capacity needs C_om C_em > {boundary:.4}");

    println!("{:>6} {:>6} {:>8} {:>8} {:>8}", "C_om", "C_em", "eta", "n_e", "Q_LB");
    for (c_om, c_em) in [(0.5, 0.5), (1.0, 1.0), (2.0, 1.5), (4.0, 4.0), (8.0, 2.0)] {
        let p = DeviceSpec {
            c_om,
            c_em,
            zeta_o: 0.9,
            zeta_e: 0.95,
            n_th: 0.2,
            ..DeviceSpec::default()
        }
        .params(Detuning::Red)?;
        let ch = dqt_channel(&p, 0.0)?;
        println!(
            "{c_om:>6} {c_em:>6} {:>8.4} {:>8.4} {:>8.4}",
            ch.eta,
            ch.n_e,
            dqt_q_lb(&p, 0.0)?
        );
    }

    let p = DeviceSpec {
        c_om: 4.0,
        c_em: 4.0,
        ..DeviceSpec::default()
    }
    .params(Detuning::Red)?;
    let total = q_lb_bandwidth_integrated(&p, &Quadrature::default())?;
    println!(
        "ideal device at C = 4: integral of Q_LB over frequency = {:.5} ({} intervals)",
        total.value, total.intervals
    );
    Ok(())
}
