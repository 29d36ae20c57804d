//! Three buck converters on one bus, sharing ratio changed twice.

use dclink::converter::{ConverterParams, Load};
use dclink::design::{canonical_outer, InnerDesign};
use dclink::network::{build_network, ConverterSpec, Mode, NetworkConfig, Schedule, Segment, SimOptions};

fn main() -> dclink::Result<()> {
    let converters = [(1.2e-3, 480.0), (1.6e-3, 460.0), (1.9e-3, 480.0)]
        .iter()
        .map(|&(l, vg)| Ok(ConverterSpec::nominal(ConverterParams::buck(l, vg)?, InnerDesign::case_study())))
        .collect::<dclink::Result<Vec<_>>>()?;
    let cfg = NetworkConfig {
        converters,
        bus_c: 500e-6,
        outer: canonical_outer(),
        mode: Mode::Centralized,
    };
    let seg = |t_start: f64, g: [f64; 3]| Segment {
        t_start,
        v_ref: 240.0,
        load: Load::Resistive { ohms: 12.0 },
        gammas: g.iter().map(|x| x / 20.0).collect(),
        i_refs: vec![],
    };
    let schedule = Schedule {
        segments: vec![seg(0.0, [10.0, 4.0, 6.0]), seg(0.3, [4.0, 8.0, 8.0]), seg(0.5, [6.0, 4.0, 10.0])],
    };
    let engine = build_network(&cfg)?;
    let started = std::time::Instant::now();
    let sim = engine.simulate(&schedule, &SimOptions::default())?;
    println!("{} samples in {:.2?}", sim.len(), started.elapsed());

    for (i, _) in schedule.segments.iter().enumerate() {
        let (t0, t1) = schedule.span(i, 0.6);
        let (a, b) = sim.index_range(t1 - 0.2 * (t1 - t0), t1);
        let mean = |x: &[f64]| x[a..b].iter().sum::<f64>() / (b - a) as f64;
        let il: Vec<String> = sim.il.iter().map(|c| format!("{:.3}", mean(c))).collect();
        println!("[{t0:.1}, {t1:.1}) s: V = {:.3} V, iL = ({})", mean(&sim.vdc), il.join(", "));
    }
    println!("saturation events: {}", sim.saturation.len());
    Ok(())
}
