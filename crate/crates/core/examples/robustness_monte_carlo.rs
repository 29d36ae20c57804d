//! Ten perturbed plants (±20% on L and C) under a 120 Hz load ripple, for two
//! notch depths.

use std::path::Path;

use dclink::analysis::ripple_amplitude;
use dclink::network::build_network;
use dclink::scenario::ScenarioFile;

fn main() -> dclink::Result<()> {
    let base = ScenarioFile::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/robustness.cfg"))?;
    for zeta1 in [1.2, 0.63] {
        println!("zeta1 = {zeta1}");
        for seed in 0..10 {
            let mut file = base.clone();
            file.network.inner.zeta1 = zeta1;
            file.sim.seed = seed;
            let sc = file.resolve()?;
            let sim = build_network(&sc.network)?.simulate(&sc.schedule, &sc.options)?;
            let (a, b) = sim.index_range(0.15, 0.3);
            let vdc = sim.vdc[a..b].iter().sum::<f64>() / (b - a) as f64;
            let il = ripple_amplitude(&sim.total_il()[a..b], sim.ts, 120.0)?;
            println!(
                "  seed {seed}: L = {:.3} mH, C = {:.1} µF, Vdc = {vdc:.3} V, iL ripple = {il:.4} A",
                sc.network.converters[0].params.inductance * 1e3,
                sc.network.bus_c * 1e6
            );
        }
    }
    Ok(())
}
