//! Inner current-loop design for a 1.2 mH inductor and the resulting notch.

use dclink::design::{design_inner, inductor_plant, shaped_plant, InnerDesign};
use dclink::lti::RIPPLE_OMEGA;

fn main() -> dclink::Result<()> {
    let l = 1.2e-3;
    for d in [InnerDesign::case_study(), InnerDesign::new(0.63, 2.1, 2.0 * std::f64::consts::PI * 200.0)?] {
        let kc = design_inner(l, &d)?;
        let closed = kc.series(&inductor_plant(l)?).feedback()?;
        let gc = shaped_plant(&d)?;
        println!("zeta1/zeta2 = {:.3}", d.notch_ratio());
        println!("  Kc(s)  = {kc}");
        println!("  Gc(s)  = {gc}");
        println!("  coefficient distance to target: {:.2e}", closed.coeff_distance(&gc));
        println!("  |Gc(j·2π·120)| = {:.4}", gc.freq_response(RIPPLE_OMEGA)?.norm());
    }
    Ok(())
}
