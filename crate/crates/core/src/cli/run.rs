use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use toml::{Table, Value};

use crate::analysis::{ripple_amplitude, segment_windows, steady_state, tracking_metrics, SteadyStateReport, TrackingMetrics};
use crate::converter::Load;
use crate::error::Result;
use crate::lti::RIPPLE_OMEGA;
use crate::network::{build_network, Schedule, SimResult};
use crate::scenario::{Overrides, Scenario, ScenarioFile};

/// Settling time written when the signal never settles.
pub const NOT_REACHED: &str = "not_reached";

/// Metrics extracted from one simulation.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub segments: Vec<SteadyStateReport>,
    pub tracking: TrackingMetrics,
    pub tracking_start: f64,
    pub tracking_v_ref: f64,
    pub ripple_hz: f64,
    pub ripple_window: (f64, f64),
    pub ripple_il_total: f64,
    pub ripple_vdc: f64,
    pub ripple_iload: f64,
    pub saturation_events: usize,
}

/// Start time and target of the last reference change, or of the whole run
/// when the reference never changes.
fn tracking_target(schedule: &Schedule) -> (usize, f64) {
    let segs = &schedule.segments;
    (1..segs.len())
        .rev()
        .find(|&i| segs[i].v_ref != segs[i - 1].v_ref)
        .map_or((0, segs[0].v_ref), |i| (i, segs[i].v_ref))
}

pub fn summarize(sim: &SimResult, schedule: &Schedule) -> Result<RunSummary> {
    let horizon = sim.len() as f64 * sim.ts;
    let segments = segment_windows(schedule, horizon)
        .into_iter()
        .map(|w| steady_state(sim, w))
        .collect::<Result<Vec<_>>>()?;

    let (seg, v_ref) = tracking_target(schedule);
    let (t0, t1) = schedule.span(seg, horizon);
    let (a, b) = sim.index_range(t0, t1);
    let tracking = tracking_metrics(&sim.vdc[..b], sim.ts, a, v_ref)?;

    let last = schedule.segments.len() - 1;
    let (s0, s1) = schedule.span(last, horizon);
    let ripple_hz = match schedule.segments[last].load {
        Load::Current {
            ripple_amplitude,
            ripple_hz,
            ..
        } if ripple_amplitude != 0.0 => ripple_hz,
        _ => RIPPLE_OMEGA / (2.0 * std::f64::consts::PI),
    };
    // Second half of the final segment.
    let (ra, rb) = sim.index_range(0.5 * (s0 + s1), s1);
    let total = sim.total_il();
    let amp = |x: &[f64]| ripple_amplitude(&x[ra..rb], sim.ts, ripple_hz);
    let n_window = crate::analysis::ripple_window(rb - ra, sim.ts, ripple_hz);
    Ok(RunSummary {
        segments,
        tracking,
        tracking_start: schedule.segments[seg].t_start,
        tracking_v_ref: v_ref,
        ripple_hz,
        ripple_window: ((rb - n_window) as f64 * sim.ts, rb as f64 * sim.ts),
        ripple_il_total: amp(&total)?,
        ripple_vdc: amp(&sim.vdc)?,
        ripple_iload: amp(&sim.iload)?,
        saturation_events: sim.saturation.len(),
    })
}

/// Summary as a TOML document.
pub fn summary_toml(name: &str, scenario: &Scenario, sim: &SimResult, s: &RunSummary) -> String {
    let mut root = Table::new();
    root.insert("scenario".into(), name.into());
    root.insert("samples".into(), (sim.len() as i64).into());
    root.insert("saturation_events".into(), (s.saturation_events as i64).into());
    root.insert("model".into(), "cycle-averaged".into());

    let mut segs = Vec::new();
    for (i, (rep, seg)) in s.segments.iter().zip(&scenario.schedule.segments).enumerate() {
        let mut t = Table::new();
        t.insert("index".into(), (i as i64 + 1).into());
        t.insert("window".into(), Value::Array(vec![rep.window.0.into(), rep.window.1.into()]));
        t.insert("v_ref".into(), seg.v_ref.into());
        if !seg.gammas.is_empty() {
            t.insert("gammas".into(), floats(&seg.gammas));
        }
        if !seg.i_refs.is_empty() {
            t.insert("i_refs".into(), floats(&seg.i_refs));
        }
        let mut mean = Table::new();
        let mut p2p = Table::new();
        for st in &rep.signals {
            mean.insert(st.name.clone(), st.mean.into());
            p2p.insert(st.name.clone(), st.peak_to_peak.into());
        }
        t.insert("mean".into(), mean.into());
        t.insert("peak_to_peak".into(), p2p.into());
        t.insert("ratios".into(), floats(&rep.ratios));
        segs.push(Value::Table(t));
    }
    root.insert("segments".into(), Value::Array(segs));

    let mut tr = Table::new();
    tr.insert("t_step".into(), s.tracking_start.into());
    tr.insert("v_ref".into(), s.tracking_v_ref.into());
    tr.insert("overshoot_pct".into(), s.tracking.overshoot_pct.into());
    tr.insert(
        "settling_time".into(),
        match s.tracking.settling_time {
            Some(t) => t.into(),
            None => NOT_REACHED.into(),
        },
    );
    tr.insert("ss_error_pct".into(), s.tracking.ss_error_pct.into());
    root.insert("tracking".into(), tr.into());

    let mut rp = Table::new();
    rp.insert("frequency_hz".into(), s.ripple_hz.into());
    rp.insert("window".into(), Value::Array(vec![s.ripple_window.0.into(), s.ripple_window.1.into()]));
    rp.insert("iL_total".into(), s.ripple_il_total.into());
    rp.insert("Vdc".into(), s.ripple_vdc.into());
    rp.insert("iload".into(), s.ripple_iload.into());
    root.insert("ripple".into(), rp.into());
    toml::to_string(&root).expect("summary serializes")
}

fn floats(x: &[f64]) -> Value {
    Value::Array(x.iter().map(|&v| v.into()).collect())
}

pub fn timeseries_csv(sim: &SimResult) -> String {
    let m = sim.m();
    let mut out = String::with_capacity(sim.len() * (m * 2 + 4) * 24);
    out.push_str("t,Vdc,iload");
    for k in 1..=m {
        let _ = write!(out, ",iL_{k}");
    }
    for k in 1..=m {
        let _ = write!(out, ",duty_{k}");
    }
    out.push_str(",e1\n");
    for n in 0..sim.len() {
        let _ = write!(out, "{:.16e},{:.16e},{:.16e}", sim.t[n], sim.vdc[n], sim.iload[n]);
        for c in &sim.il {
            let _ = write!(out, ",{:.16e}", c[n]);
        }
        for c in &sim.duty {
            let _ = write!(out, ",{:.16e}", c[n]);
        }
        let _ = writeln!(out, ",{:.16e}", sim.e1[n]);
    }
    out
}

pub fn meta_text(scenario: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dclink {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "seed = {}", scenario.seed);
    let _ = writeln!(out, "model = cycle-averaged, RK4 plant, Tustin controllers");
    let _ = writeln!(out, "bus_c_simulated = {:e}", scenario.network.bus_c);
    for (k, c) in scenario.network.converters.iter().enumerate() {
        let _ = writeln!(
            out,
            "converter_{} = {{ inductance = {:e}, design_inductance = {:e}, vg = {}, kv_scale = {} }}",
            k + 1,
            c.params.inductance,
            c.design_inductance,
            c.params.vg,
            c.kv_scale
        );
    }
    out.push_str("\n# resolved scenario\n");
    out.push_str(&scenario.file.to_toml());
    out
}

/// Everything produced by `run`.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub scenario: Scenario,
    pub sim: SimResult,
    pub summary: RunSummary,
}

pub fn run_file(path: &Path, out_dir: &Path, overrides: &Overrides) -> Result<RunOutcome> {
    let mut file = ScenarioFile::load(path)?;
    file.apply(overrides);
    let name = path
        .file_stem()
        .map_or_else(|| "scenario".to_string(), |s| s.to_string_lossy().into_owned());
    run_resolved(&name, &file, out_dir)
}

pub fn run_resolved(name: &str, file: &ScenarioFile, out_dir: &Path) -> Result<RunOutcome> {
    let scenario = file.resolve()?;
    let engine = build_network(&scenario.network)?;
    let sim = engine.simulate(&scenario.schedule, &scenario.options)?;
    let summary = summarize(&sim, &scenario.schedule)?;
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("timeseries.csv"), timeseries_csv(&sim))?;
    fs::write(out_dir.join("summary.txt"), summary_toml(name, &scenario, &sim, &summary))?;
    fs::write(out_dir.join("meta.txt"), meta_text(&scenario))?;
    Ok(RunOutcome { scenario, sim, summary })
}
