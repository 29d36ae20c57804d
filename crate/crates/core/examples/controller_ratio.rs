//! Frequency responses of the outer controllers and of the closed-loop maps,
//! and how close Kr is to a fixed multiple of Kv.

use dclink::design::{bus_plant, canonical_outer, controller_ratio, controller_ratio_analysis, sensitivity_family, shaped_plant, InnerDesign};
use dclink::lti::FrequencyGrid;

fn main() -> dclink::Result<()> {
    let k = canonical_outer();
    let gc = shaped_plant(&InnerDesign::case_study())?;
    let fam = sensitivity_family(&bus_plant(500e-6)?, &gc, &k)?;

    println!("{:>10} {:>9} {:>9} {:>9} {:>9} {:>9}", "omega", "|Kv|", "|Kr|", "|S1|", "|T1|", "|H|");
    for w in [1.0, 10.0, 100.0, 754.0, 1e3, 1e4, 1e5] {
        let m = |g: &dclink::lti::TransferFunction| g.freq_response(w).map(|z| z.norm());
        println!(
            "{w:>10.1} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            m(&k.kv)?,
            m(&k.kr)?,
            m(&fam.s1)?,
            m(&fam.t1)?,
            m(&fam.h)?
        );
    }

    let r = controller_ratio_analysis(&k, &FrequencyGrid::standard())?;
    println!("median |Kr/Kv| = {:.4}, median Re = {:.4}, worst relative deviation = {:.3}", r.alpha, r.alpha_signed, r.flatness);
    println!("Kr/Kv at 0 rad/s: {:.4}", controller_ratio(&k, 0.0)?);
    Ok(())
}
