//! Reference step on a single converter, with and without the load-current
//! measurement.

use dclink::analysis::tracking_metrics;
use dclink::converter::{ConverterParams, Load};
use dclink::design::{canonical_outer, droop_filter, InnerDesign};
use dclink::network::{build_network, ConverterSpec, Mode, NetworkConfig, Schedule, Segment, SimOptions};

fn main() -> dclink::Result<()> {
    let seg = |t_start: f64, v_ref: f64| Segment {
        t_start,
        v_ref,
        load: Load::Resistive { ohms: 12.0 },
        gammas: vec![1.0],
        i_refs: vec![16.0],
    };
    let schedule = Schedule {
        segments: vec![seg(0.0, 200.0), seg(0.05, 240.0)],
    };
    let opts = SimOptions {
        duration: 0.3,
        ..Default::default()
    };
    for (name, mode) in [
        ("centralized", Mode::Centralized),
        ("droop", Mode::Decentralized { droop: droop_filter() }),
    ] {
        let cfg = NetworkConfig {
            converters: vec![ConverterSpec::nominal(ConverterParams::buck(1.2e-3, 480.0)?, InnerDesign::case_study())],
            bus_c: 500e-6,
            outer: canonical_outer(),
            mode,
        };
        let sim = build_network(&cfg)?.simulate(&schedule, &opts)?;
        let (start, _) = sim.index_range(0.05, 0.3);
        let m = tracking_metrics(&sim.vdc, sim.ts, start, 240.0)?;
        let peak = sim.vdc[start..].iter().copied().fold(f64::MIN, f64::max);
        println!(
            "{name:>11}: peak {peak:.2} V, final {:.2} V, overshoot {:.2}%, settling {}, error {:.2}%",
            sim.vdc.last().unwrap(),
            m.overshoot_pct,
            m.settling_time.map_or("not reached".into(), |t| format!("{:.1} ms", t * 1e3)),
            m.ss_error_pct
        );
    }
    Ok(())
}
