//! Entanglement measures of two-mode standard forms.

use gausslink::entanglement::{duan_quantity, entanglement_of_formation, entanglement_rate, ppt_min_eigenvalue};
use gausslink::integrate::Quadrature;
use gausslink::transducer::{output_mo_covariance, DeviceSpec, Detuning};
use gausslink::TwoModeStandardForm;

fn main() -> gausslink::Result<()> {
    let forms = [
        ("(17, 9, 12)", TwoModeStandardForm::new(17.0, 9.0, 12.0)?),
        ("TMSV(0.5)", TwoModeStandardForm::tmsv(0.5)),
        ("separable", TwoModeStandardForm::new(3.0, 3.0, 1.5)?),
    ];
    println!("{:<12} {:>8} {:>8} {:>8}", "state", "E_F", "Duan", "PPT nu");
    for (name, f) in &forms {
        println!(
            "{name:<12} {:>8.4} {:>8.4} {:>8.4}",
            entanglement_of_formation(f)?,
            duan_quantity(f),
            ppt_min_eigenvalue(f)
        );
    }

    let p = DeviceSpec {
        c_om: 0.5,
        c_em: 2.0,
        ..DeviceSpec::default()
    }
    .params(Detuning::Blue)?;
    let dc = output_mo_covariance(&p, 0.0)?;
    println!("device output at DC has E_F = {:.4} ebit", entanglement_of_formation(&dc)?);
    for tau in [1.0, 0.5, 0.1] {
        let rate = entanglement_rate(&p, tau, &Quadrature::default())?;
        println!("swapped E_F rate at tau = {tau}: {:.5} ebit per unit time", rate.value);
    }
    Ok(())
}
