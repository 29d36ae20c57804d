//! Weighted closed loop of the canonical design: stability and H∞ norm.

use dclink::design::{
    bus_plant, canonical_outer, canonical_weights, generalized_plant, shaped_plant, weighted_closed_loop, InnerDesign,
};
use dclink::lti::{hinf_norm, hinf_norm_grid_oracle, oracle_grid};

fn main() -> dclink::Result<()> {
    let gv = bus_plant(500e-6)?;
    let gc = shaped_plant(&InnerDesign::case_study())?;
    let k = canonical_outer();
    println!("Kv(0) = {:.4}, Kr(0) = {:.4}", k.kv.dc_gain()?, k.kr.dc_gain()?);

    let gp = generalized_plant(&gv, &gc, &canonical_weights());
    let cl = weighted_closed_loop(&gp, &k)?;
    println!("closed loop: {} states", cl.n_states());

    let gamma = hinf_norm(&cl, 1e-9)?;
    let grid = oracle_grid(&cl, 4000)?;
    let oracle = hinf_norm_grid_oracle(&cl, &grid)?;
    println!("‖Tzw‖∞ = {gamma:.9} (grid oracle {oracle:.9})");
    Ok(())
}
