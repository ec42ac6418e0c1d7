//! Entanglement swapping between two transducers through a lossy optical
//! link, with the numerical general-dyne path converging to the closed
//! form.

use gausslink::entanglement::entanglement_of_formation;
use gausslink::swapping::{apply_optical_loss, mm_capacity, mm_swap_closed, mm_swap_numeric, swapped_form, SwapSetup};
use gausslink::transducer::{output_mo_covariance, DeviceSpec, Detuning};
use gausslink::TwoModeStandardForm;

fn main() -> gausslink::Result<()> {
    let p = DeviceSpec {
        c_om: 0.8,
        c_em: 3.0,
        ..DeviceSpec::default()
    }
    .params(Detuning::Blue)?;
    let source = output_mo_covariance(&p, 0.0)?;

    for tau in [1.0, 0.7, 0.3] {
        let lossy = apply_optical_loss(&source, tau)?;
        let mm = swapped_form(&lossy)?;
        let cap = mm_capacity(&mm)?;
        println!(
            "tau {tau}: E_F(MO) = {:.4}, E_F(MM) = {:.4}, teleportation Q_LB over MM = {:.4}",
            entanglement_of_formation(&lossy)?,
            entanglement_of_formation(&mm)?,
            cap.q_lb_opt
        );
    }

    let form = TwoModeStandardForm::new(17.0, 9.0, 12.0)?;
    let closed = mm_swap_closed(&form)?;
    for r in [2.0, 4.0, 6.0, 8.0, 10.0] {
        let gap = (mm_swap_numeric(&form, &form, r)? - &closed).amax();
        println!("general-dyne seed r = {r:>4}: distance to the EPR limit {gap:.2e}");
    }

    let setup = SwapSetup::new(p, p, 0.7, 10.0)?;
    println!("MM covariance at detuning 0.5:{:.4}", setup.mm_covariance(0.5)?);
    Ok(())
}
