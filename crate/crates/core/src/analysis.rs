//! Verification metrics over closed-loop maps and simulated trajectories.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::design::SensitivityFamily;
use crate::error::{Error, Result};
use crate::lti::{FrequencyGrid, TransferFunction};
use crate::network::{NetworkMaps, Schedule, SimResult};

/// Largest relative deviation of `multi` from `single` over the grid,
/// taken over both channels.
pub fn equivalence_residual(single: &NetworkMaps, multi: &NetworkMaps, grid: &FrequencyGrid) -> Result<f64> {
    let mut worst = 0.0f64;
    for &w in grid.omegas() {
        for (a, b) in [
            (&single.from_vref, &multi.from_vref),
            (&single.from_iload, &multi.from_iload),
        ] {
            worst = worst.max(relative_deviation(a, b, w)?);
        }
    }
    Ok(worst)
}

fn relative_deviation(reference: &TransferFunction, other: &TransferFunction, w: f64) -> Result<f64> {
    let r = reference.freq_response(w)?;
    let o = other.freq_response(w)?;
    let diff = (r - o).norm();
    Ok(if diff == 0.0 { 0.0 } else { diff / r.norm() })
}

/// Phasors of the exogenous signals at each grid frequency.
#[derive(Debug, Clone)]
pub struct SharingSignals {
    pub v_ref: Vec<Complex64>,
    pub i_load: Vec<Complex64>,
    /// `i_refs[k][j]`: reference of converter `k` at grid point `j`.
    pub i_refs: Vec<Vec<Complex64>>,
}

/// Bound evaluation at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharingBoundRow {
    pub omega: f64,
    pub epsilon_h: f64,
    pub epsilon_s2: f64,
    /// `|Σ i_ref,k − i_load|`.
    pub delta: f64,
    /// `|iL_k − i_ref,k|` from the exact closed-loop expression.
    pub lhs: f64,
    pub rhs: f64,
    /// `|T1|, |T2| < 1 + ε` at this frequency.
    pub premises_hold: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct SharingBoundReport {
    pub converter: usize,
    pub rows: Vec<SharingBoundRow>,
}

impl SharingBoundReport {
    /// Rows where the premises hold but the bound does not.
    pub fn violations(&self) -> impl Iterator<Item = &SharingBoundRow> {
        self.rows.iter().filter(|r| r.premises_hold && !r.satisfied)
    }

    pub fn premise_failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.premises_hold).count()
    }

    pub fn passes(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Evaluates the current-tracking error of converter `k` in a symmetric
/// network of `m` converters,
///
/// ```text
/// iL_k − i_ref,k = H·V_ref/m − T1·T2·(Σ i_ref − i_load)/m + T1·S2·i_load/m − S2·i_ref,k
/// ```
///
/// against `ε|V_ref|/m + ε(1+ε)|i_load|/m + (1+ε)²Δ/m + ε|i_ref,k|` with
/// `ε = max(|H|, |S2|)` per frequency.
pub fn sharing_bound_check(
    family: &SensitivityFamily,
    signals: &SharingSignals,
    k: usize,
    m: usize,
    grid: &FrequencyGrid,
) -> Result<SharingBoundReport> {
    let n = grid.len();
    if signals.v_ref.len() != n || signals.i_load.len() != n || signals.i_refs.iter().any(|r| r.len() != n) {
        return Err(Error::Domain("signal phasors must have one entry per grid frequency".into()));
    }
    if signals.i_refs.len() != m || k >= m {
        return Err(Error::Domain(format!("need {m} reference series and k < m, got k = {k}")));
    }
    let mf = m as f64;
    let mut rows = Vec::with_capacity(n);
    for (j, &w) in grid.omegas().iter().enumerate() {
        let h = family.h.freq_response(w)?;
        let s2 = family.s2.freq_response(w)?;
        let t1 = family.t1.freq_response(w)?;
        let t2 = family.t2.freq_response(w)?;
        let (vr, il) = (signals.v_ref[j], signals.i_load[j]);
        let ik = signals.i_refs[k][j];
        let mismatch: Complex64 = signals.i_refs.iter().map(|r| r[j]).sum::<Complex64>() - il;

        let err = h * vr / mf - t1 * t2 * mismatch / mf + t1 * s2 * il / mf - s2 * ik;
        let eps = h.norm().max(s2.norm());
        let delta = mismatch.norm();
        let rhs = eps / mf * vr.norm()
            + eps * (1.0 + eps) / mf * il.norm()
            + (1.0 + eps).powi(2) * delta / mf
            + eps * ik.norm();
        let lhs = err.norm();
        rows.push(SharingBoundRow {
            omega: w,
            epsilon_h: h.norm(),
            epsilon_s2: s2.norm(),
            delta,
            lhs,
            rhs,
            premises_hold: t1.norm() < 1.0 + eps && t2.norm() < 1.0 + eps,
            satisfied: lhs < rhs,
        });
    }
    Ok(SharingBoundReport { converter: k, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalStats {
    pub name: String,
    pub mean: f64,
    pub peak_to_peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub window: (f64, f64),
    pub signals: Vec<SignalStats>,
    /// Mean inductor currents normalized to their sum.
    pub ratios: Vec<f64>,
}

impl SteadyStateReport {
    pub fn get(&self, name: &str) -> Option<&SignalStats> {
        self.signals.iter().find(|s| s.name == name)
    }

    pub fn mean(&self, name: &str) -> f64 {
        self.get(name).map_or(f64::NAN, |s| s.mean)
    }
}

fn stats(name: String, x: &[f64]) -> SignalStats {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    SignalStats {
        name,
        mean,
        peak_to_peak: hi - lo,
    }
}

/// Means and peak-to-peak values over `[t0, t1)`.
pub fn steady_state(sim: &SimResult, window: (f64, f64)) -> Result<SteadyStateReport> {
    let (t0, t1) = window;
    let horizon = sim.len() as f64 * sim.ts;
    if !(t0 >= 0.0 && t1 > t0 && t1 <= horizon + 1e-9 * sim.ts) {
        return Err(Error::Domain(format!(
            "window [{t0}, {t1}) outside the simulated range [0, {horizon})"
        )));
    }
    let (a, b) = sim.index_range(t0, t1);
    if b <= a {
        return Err(Error::Domain(format!("window [{t0}, {t1}) contains no samples")));
    }
    let mut signals = vec![stats("Vdc".into(), &sim.vdc[a..b]), stats("iload".into(), &sim.iload[a..b])];
    for (k, c) in sim.il.iter().enumerate() {
        signals.push(stats(format!("iL_{}", k + 1), &c[a..b]));
    }
    for (k, c) in sim.duty.iter().enumerate() {
        signals.push(stats(format!("duty_{}", k + 1), &c[a..b]));
    }
    signals.push(stats("e1".into(), &sim.e1[a..b]));
    let means: Vec<f64> = (0..sim.m()).map(|k| signals[2 + k].mean).collect();
    let total: f64 = means.iter().sum();
    let ratios = means.iter().map(|x| x / total).collect();
    Ok(SteadyStateReport {
        window,
        signals,
        ratios,
    })
}

/// Fraction of each segment treated as settled.
pub const SETTLED_FRACTION: f64 = 0.2;

/// Final 20% of every schedule segment, clipped to the horizon.
pub fn segment_windows(schedule: &Schedule, horizon: f64) -> Vec<(f64, f64)> {
    (0..schedule.segments.len())
        .filter_map(|i| {
            let (s, e) = schedule.span(i, horizon);
            (e > s).then_some((e - SETTLED_FRACTION * (e - s), e))
        })
        .collect()
}

/// Number of trailing samples spanning the largest whole number of periods
/// of `f` that also lands on a sample boundary.
pub fn ripple_window(len: usize, ts: f64, f: f64) -> usize {
    let per_period = 1.0 / (f * ts);
    let max_periods = (len as f64 / per_period).floor() as usize;
    for p in (1..=max_periods).rev() {
        let n = p as f64 * per_period;
        if (n - n.round()).abs() < 1e-6 {
            return n.round() as usize;
        }
    }
    // No aligned window: fall back to the nearest whole number of periods.
    ((max_periods.max(1) as f64 * per_period).round() as usize).min(len)
}

/// Amplitude of the `f` component over the tail of `series`, as a single
/// DFT bin scaled to sinusoid amplitude.
pub fn ripple_amplitude(series: &[f64], ts: f64, f: f64) -> Result<f64> {
    if !(ts > 0.0 && f > 0.0) {
        return Err(Error::Domain("ripple_amplitude needs Ts > 0 and f > 0".into()));
    }
    if series.is_empty() {
        return Err(Error::Domain("ripple_amplitude of an empty series".into()));
    }
    let n = ripple_window(series.len(), ts, f);
    let tail = &series[series.len() - n..];
    let step = 2.0 * PI * f * ts;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &x) in tail.iter().enumerate() {
        acc += x * Complex64::from_polar(1.0, -step * k as f64);
    }
    Ok(2.0 * acc.norm() / n as f64)
}

/// Step-response quality of the bus voltage after a reference change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingMetrics {
    /// Peak excursion past the final reference, in percent of the step.
    pub overshoot_pct: f64,
    /// Time after the step until the signal stays inside a 2% band around
    /// its settled value; `None` if it never does.
    pub settling_time: Option<f64>,
    /// Settled value's deviation from the reference, in percent of it.
    pub ss_error_pct: f64,
}

pub const SETTLING_BAND: f64 = 0.02;

/// Metrics of `series` from sample `start` on, for a reference stepping to
/// `v_ref_final`.
pub fn tracking_metrics(series: &[f64], ts: f64, start: usize, v_ref_final: f64) -> Result<TrackingMetrics> {
    if start >= series.len() {
        return Err(Error::Domain("tracking window is empty".into()));
    }
    let x = &series[start..];
    let v0 = x[0];
    let tail_len = ((x.len() as f64 * SETTLED_FRACTION).ceil() as usize).max(1);
    let tail = &x[x.len() - tail_len..];
    let settled = tail.iter().sum::<f64>() / tail_len as f64;

    let step = v_ref_final - v0;
    let overshoot_pct = if step == 0.0 {
        0.0
    } else {
        let dir = step.signum();
        let peak = x.iter().map(|v| dir * (v - v_ref_final)).fold(f64::NEG_INFINITY, f64::max);
        (peak.max(0.0) / step.abs()) * 100.0
    };

    let scale = if step != 0.0 { step.abs() } else { v_ref_final.abs() };
    let band = SETTLING_BAND * scale;
    let settling_time = if tail.iter().any(|v| (v - settled).abs() > band) {
        None
    } else {
        let last_out = x.iter().rposition(|v| (v - settled).abs() > band);
        Some(last_out.map_or(0.0, |i| (i + 1) as f64 * ts))
    };
    Ok(TrackingMetrics {
        overshoot_pct,
        settling_time,
        ss_error_pct: (settled - v_ref_final).abs() / v_ref_final.abs() * 100.0,
    })
}
