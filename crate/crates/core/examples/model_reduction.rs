//! Balanced truncation of the weighted closed loop, checked against the
//! Hankel-value bound.

use dclink::design::{bus_plant, canonical_outer, canonical_weights, generalized_plant, shaped_plant, weighted_closed_loop, InnerDesign};
use dclink::lti::{balanced_truncation, hankel_singular_values, hinf_norm};

fn main() -> dclink::Result<()> {
    let gc = shaped_plant(&InnerDesign::case_study())?;
    let gp = generalized_plant(&bus_plant(500e-6)?, &gc, &canonical_weights());
    let cl = weighted_closed_loop(&gp, &canonical_outer())?;

    let hsv = hankel_singular_values(&cl)?;
    println!("Hankel singular values:");
    for (i, h) in hsv.iter().enumerate() {
        println!("  {:>2}  {h:.6e}", i + 1);
    }
    for order in [4, 8, 12, 16] {
        let red = balanced_truncation(&cl, order)?;
        let err = hinf_norm(&cl.difference(&red.reduced)?, 1e-9)?;
        println!("order {order:>2}: ‖G − Gr‖∞ = {err:.4e}, bound {:.4e}", red.error_bound());
    }
    Ok(())
}
