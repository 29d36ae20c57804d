use crate::converter::{ConverterParams, Load};
use crate::design::{InnerDesign, OuterControllers};
use crate::error::{Error, Result};
use crate::lti::TransferFunction;

/// One converter of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ConverterSpec {
    /// Plant actually simulated.
    pub params: ConverterParams,
    /// Inductance the inner controller `Kc` is designed for. Differs from
    /// `params.inductance` in robustness runs.
    pub design_inductance: f64,
    pub inner: InnerDesign,
    /// Multiplier on this converter's share of `Kv`. 1 for a symmetric design.
    pub kv_scale: f64,
}

impl ConverterSpec {
    pub fn nominal(params: ConverterParams, inner: InnerDesign) -> Self {
        Self {
            design_inductance: params.inductance,
            params,
            inner,
            kv_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    /// Each current controller tracks `γk·i_load`.
    Centralized,
    /// Each current controller tracks `i_ref,k + F∗(V_ref − V)`.
    Decentralized { droop: TransferFunction },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub converters: Vec<ConverterSpec>,
    /// Bus capacitance, F.
    pub bus_c: f64,
    /// Shared outer design; converter `k` runs `kv_scale_k·Kv/m` and `Kr`.
    pub outer: OuterControllers,
    pub mode: Mode,
}

impl NetworkConfig {
    pub fn m(&self) -> usize {
        self.converters.len()
    }

    /// Voltage controller of converter `k`.
    pub fn kv_of(&self, k: usize) -> TransferFunction {
        self.outer.kv.scale(self.converters[k].kv_scale / self.m() as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.converters.is_empty() {
            return Err(Error::config("network.converters", "at least one converter is required"));
        }
        if !(self.bus_c > 0.0 && self.bus_c.is_finite()) {
            return Err(Error::config("network.bus_c", format!("must be > 0, got {}", self.bus_c)));
        }
        for (k, c) in self.converters.iter().enumerate() {
            let path = |f: &str| format!("network.converters[{k}].{f}");
            c.inner
                .validate()
                .map_err(|e| Error::config(path("inner"), e.to_string()))?;
            if !(c.design_inductance > 0.0 && c.design_inductance.is_finite()) {
                return Err(Error::config(path("design_inductance"), "must be > 0"));
            }
            if !(c.params.inductance > 0.0 && c.params.inductance.is_finite()) {
                return Err(Error::config(path("inductance"), "must be > 0"));
            }
            if !c.kv_scale.is_finite() {
                return Err(Error::config(path("kv_scale"), "must be finite"));
            }
        }
        for (name, g) in [("kv", &self.outer.kv), ("kr", &self.outer.kr)] {
            if !g.is_proper() {
                return Err(Error::config(format!("controllers.{name}"), "must be proper"));
            }
        }
        if let Mode::Decentralized { droop } = &self.mode {
            if !droop.is_proper() {
                return Err(Error::config("mode.droop", "must be proper"));
            }
        }
        Ok(())
    }
}

/// Piecewise-constant operating schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub t_start: f64,
    pub v_ref: f64,
    pub load: Load,
    /// Sharing ratios (centralized mode).
    pub gammas: Vec<f64>,
    /// Current references, A (decentralized mode).
    pub i_refs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub segments: Vec<Segment>,
}

/// Tolerance on `Σ γk = 1`.
pub const GAMMA_SUM_TOL: f64 = 1e-9;

impl Schedule {
    pub fn constant(segment: Segment) -> Self {
        Self {
            segments: vec![Segment { t_start: 0.0, ..segment }],
        }
    }

    /// Checks ordering, loads and the per-mode reference vectors.
    pub fn validate(&self, cfg: &NetworkConfig) -> Result<()> {
        let m = cfg.m();
        if self.segments.is_empty() {
            return Err(Error::config("schedule.segments", "at least one segment is required"));
        }
        if self.segments[0].t_start != 0.0 {
            return Err(Error::config("schedule.segments[0].t_start", "first segment must start at 0"));
        }
        for (i, seg) in self.segments.iter().enumerate() {
            let path = |f: &str| format!("schedule.segments[{i}].{f}");
            if i > 0 && !(seg.t_start > self.segments[i - 1].t_start) {
                return Err(Error::config(path("t_start"), "segment start times must strictly increase"));
            }
            if !(seg.v_ref > 0.0 && seg.v_ref.is_finite()) {
                return Err(Error::config(path("v_ref"), format!("must be > 0, got {}", seg.v_ref)));
            }
            seg.load.validate().map_err(|e| Error::config(path("load"), e.to_string()))?;
            for (k, c) in cfg.converters.iter().enumerate() {
                c.params
                    .validate_for(seg.v_ref)
                    .map_err(|e| Error::config(format!("network.converters[{k}]"), e.to_string()))?;
            }
            match cfg.mode {
                Mode::Centralized => {
                    if seg.gammas.len() != m {
                        return Err(Error::config(
                            path("gammas"),
                            format!("expected {m} entries, got {}", seg.gammas.len()),
                        ));
                    }
                    if seg.gammas.iter().any(|g| !(0.0..=1.0).contains(g)) {
                        return Err(Error::config(path("gammas"), "each entry must lie in [0, 1]"));
                    }
                    let sum: f64 = seg.gammas.iter().sum();
                    if (sum - 1.0).abs() > GAMMA_SUM_TOL {
                        return Err(Error::config(path("gammas"), format!("must sum to 1, got {sum}")));
                    }
                }
                Mode::Decentralized { .. } => {
                    if seg.i_refs.len() != m {
                        return Err(Error::config(
                            path("i_refs"),
                            format!("expected {m} entries, got {}", seg.i_refs.len()),
                        ));
                    }
                    if seg.i_refs.iter().any(|x| !x.is_finite()) {
                        return Err(Error::config(path("i_refs"), "entries must be finite"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the segment active at `t`.
    pub fn index_at(&self, t: f64) -> usize {
        self.segments
            .iter()
            .rposition(|s| s.t_start <= t)
            .unwrap_or(0)
    }

    pub fn at(&self, t: f64) -> &Segment {
        &self.segments[self.index_at(t)]
    }

    /// `[start, end)` of segment `i`, with `end` clipped to `horizon`.
    pub fn span(&self, i: usize, horizon: f64) -> (f64, f64) {
        let start = self.segments[i].t_start;
        let end = self.segments.get(i + 1).map_or(horizon, |s| s.t_start.min(horizon));
        (start, end)
    }
}
