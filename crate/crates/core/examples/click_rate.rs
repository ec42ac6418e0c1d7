//! Heralded Bell-pair rates of the photon-click swapping scheme.

use gausslink::integrate::Quadrature;
use gausslink::swapping::{bell_rate, click_rate};
use gausslink::transducer::{DeviceSpec, Detuning};

fn main() -> gausslink::Result<()> {
    let dt = 10.0;
    println!("peak Bell rate for pulse length {dt}: {:.5}", bell_rate(1.0 / dt, dt));

    println!("{:>6} {:>6} {:>10} {:>10}", "C_om", "tau", "r_t", "r_B");
    for c_om in [0.1, 0.5, 2.0, 8.0] {
        let p = DeviceSpec {
            c_om,
            c_em: 10.0,
            ..DeviceSpec::default()
        }
        .params(Detuning::Blue)?;
        for tau in [1.0, 0.2] {
            let rates = click_rate(&p, tau, dt, &Quadrature::default())?;
            println!("{c_om:>6} {tau:>6} {:>10.5} {:>10.5}", rates.r_t, rates.r_b);
        }
    }
    Ok(())
}
