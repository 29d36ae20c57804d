//! Scenario files: TOML text describing a network, its controllers, a
//! schedule and simulation settings.
//!
//! ```toml
//! [network]
//! bus_c = 500e-6
//! inner = { zeta1 = 1.2, zeta2 = 2.1, omega_tilde = 1256.6370614359173 }
//!
//! [[network.converters]]
//! inductance = 1.2e-3
//! vg = 480.0
//!
//! [controllers]
//! kind = "canonical"
//!
//! [mode]
//! kind = "centralized"
//!
//! [[schedule.segments]]
//! t_start = 0.0
//! v_ref = 240.0
//! r = 12.0
//! gammas = [1.0]
//!
//! [sim]
//! duration = 0.3
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::converter::{ConverterParams, Load, Perturber, Topology};
use crate::design::{canonical_outer, canonical_weights, droop_filter, InnerDesign, OuterControllers, WeightSet};
use crate::error::{Error, Result};
use crate::lti::TransferFunction;
use crate::network::{ConverterSpec, Init, Mode, NetworkConfig, Schedule, Segment, SimOptions};

/// Coefficient lists in descending powers of `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfSpec {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl TfSpec {
    pub fn to_tf(&self, path: &str) -> Result<TransferFunction> {
        TransferFunction::from_coeffs(&self.num, &self.den).map_err(|e| Error::config(path, e.to_string()))
    }

    pub fn from_tf(g: &TransferFunction) -> Self {
        Self {
            num: g.num().coeffs().to_vec(),
            den: g.den().coeffs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub network: NetworkSection,
    #[serde(default)]
    pub controllers: ControllersSection,
    #[serde(default)]
    pub weights: Option<WeightsSection>,
    pub mode: ModeSection,
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub sim: SimSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub bus_c: f64,
    /// Inner design shared by converters that do not set their own.
    pub inner: InnerDesign,
    pub converters: Vec<ConverterSection>,
}

fn buck() -> Topology {
    Topology::Buck
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConverterSection {
    pub inductance: f64,
    pub vg: f64,
    #[serde(default = "buck")]
    pub topology: Topology,
    /// Inductance the inner controller is designed for; defaults to
    /// `inductance`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design_inductance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<InnerDesign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kv_scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControllersSection {
    #[default]
    Canonical,
    Coefficients { kv: TfSpec, kr: TfSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    pub w1: Option<TfSpec>,
    pub w2: Option<TfSpec>,
    pub w3: Option<TfSpec>,
    pub w4: Option<TfSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeSection {
    Centralized,
    Decentralized { droop: TfSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub segments: Vec<SegmentSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSection {
    pub t_start: f64,
    pub v_ref: f64,
    /// Resistive load, Ω. Exactly one of `r` and `i_load` must be set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// DC part of a current-source load, A.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_load: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ripple_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ripple_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub i_refs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitSection {
    Equilibrium,
    Cold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub duration: f64,
    pub ts: f64,
    pub substeps: usize,
    pub seed: u64,
    /// Plant perturbation: each inductance and the bus capacitance are
    /// scaled by a factor drawn uniformly from `[1 − u, 1 + u]`.
    pub uncertainty: f64,
    pub init: InitSection,
}

impl Default for SimSection {
    fn default() -> Self {
        let d = SimOptions::default();
        Self {
            duration: d.duration,
            ts: d.ts,
            substeps: d.substeps,
            seed: 0,
            uncertainty: 0.0,
            init: InitSection::Equilibrium,
        }
    }
}

/// Command-line overrides applied on top of the `[sim]` section.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub ts: Option<f64>,
    pub duration: Option<f64>,
}

/// A scenario resolved into library types.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub network: NetworkConfig,
    pub schedule: Schedule,
    pub options: SimOptions,
    pub weights: WeightSet,
    pub seed: u64,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let at = e
                .span()
                .map(|s| {
                    let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                })
                .unwrap_or_else(|| "file".into());
            Error::config(at, e.message().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario types serialize")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.sim.seed = s;
        }
        if let Some(ts) = o.ts {
            self.sim.ts = ts;
        }
        if let Some(d) = o.duration {
            self.sim.duration = d;
        }
    }

    /// Validates the whole file and builds the library objects.
    pub fn resolve(&self) -> Result<Scenario> {
        let sim = &self.sim;
        if !(0.0..1.0).contains(&sim.uncertainty) {
            return Err(Error::config("sim.uncertainty", "must lie in [0, 1)"));
        }
        let mut perturb = Perturber::new(sim.uncertainty, sim.seed)?;
        let segments = self
            .schedule
            .segments
            .iter()
            .enumerate()
            .map(|(i, s)| s.resolve(i))
            .collect::<Result<Vec<_>>>()?;
        let first_vref = segments
            .first()
            .map(|s| s.v_ref)
            .ok_or_else(|| Error::config("schedule.segments", "at least one segment is required"))?;

        let converters = self
            .network
            .converters
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let path = format!("network.converters[{k}]");
                let params = match c.topology {
                    Topology::Buck => ConverterParams::buck(c.inductance, c.vg),
                    Topology::Boost => ConverterParams::boost(c.inductance, c.vg, first_vref),
                }
                .map_err(|e| Error::config(&path, e.to_string()))?;
                Ok(ConverterSpec {
                    design_inductance: c.design_inductance.unwrap_or(c.inductance),
                    params: perturb.params(&params),
                    inner: c.inner.unwrap_or(self.network.inner),
                    kv_scale: c.kv_scale.unwrap_or(1.0),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let outer = match &self.controllers {
            ControllersSection::Canonical => canonical_outer(),
            ControllersSection::Coefficients { kv, kr } => OuterControllers {
                kv: kv.to_tf("controllers.kv")?,
                kr: kr.to_tf("controllers.kr")?,
            },
        };
        let mode = match &self.mode {
            ModeSection::Centralized => Mode::Centralized,
            ModeSection::Decentralized { droop } => Mode::Decentralized {
                droop: droop.to_tf("mode.droop")?,
            },
        };
        let network = NetworkConfig {
            converters,
            bus_c: perturb.scale(self.network.bus_c),
            outer,
            mode,
        };
        network.validate()?;
        let schedule = Schedule { segments };
        schedule.validate(&network)?;

        let mut weights = canonical_weights();
        if let Some(w) = &self.weights {
            for (spec, slot, name) in [
                (&w.w1, &mut weights.w1, "weights.w1"),
                (&w.w2, &mut weights.w2, "weights.w2"),
                (&w.w3, &mut weights.w3, "weights.w3"),
                (&w.w4, &mut weights.w4, "weights.w4"),
            ] {
                if let Some(s) = spec {
                    *slot = s.to_tf(name)?;
                }
            }
        }
        if !(sim.ts > 0.0 && sim.ts.is_finite()) {
            return Err(Error::config("sim.ts", "must be > 0"));
        }
        if !(sim.duration >= sim.ts) {
            return Err(Error::config("sim.duration", "must be at least one sample period"));
        }
        if sim.substeps == 0 {
            return Err(Error::config("sim.substeps", "must be >= 1"));
        }
        Ok(Scenario {
            file: self.clone(),
            network,
            schedule,
            options: SimOptions {
                duration: sim.duration,
                ts: sim.ts,
                substeps: sim.substeps,
                init: match sim.init {
                    InitSection::Equilibrium => Init::Equilibrium,
                    InitSection::Cold => Init::Cold,
                },
            },
            weights,
            seed: sim.seed,
        })
    }
}

impl SegmentSection {
    fn resolve(&self, i: usize) -> Result<Segment> {
        let path = |f: &str| format!("schedule.segments[{i}].{f}");
        let load = match (self.r, self.i_load) {
            (Some(ohms), None) => {
                if self.ripple_amplitude.is_some() || self.ripple_hz.is_some() {
                    return Err(Error::config(path("ripple_amplitude"), "ripple applies to current loads only"));
                }
                Load::Resistive { ohms }
            }
            (None, Some(dc)) => Load::Current {
                dc,
                ripple_amplitude: self.ripple_amplitude.unwrap_or(0.0),
                ripple_hz: self.ripple_hz.unwrap_or(120.0),
            },
            _ => return Err(Error::config(path("r"), "set exactly one of `r` and `i_load`")),
        };
        Ok(Segment {
            t_start: self.t_start,
            v_ref: self.v_ref,
            load,
            gammas: self.gammas.clone(),
            i_refs: self.i_refs.clone(),
        })
    }
}

/// The built-in single-converter droop filter as a coefficient spec.
pub fn droop_filter_spec() -> TfSpec {
    TfSpec::from_tf(&droop_filter())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[network]
bus_c = 500e-6
inner = { zeta1 = 1.2, zeta2 = 2.1, omega_tilde = 1256.6370614359173 }

[[network.converters]]
inductance = 1.2e-3
vg = 480.0

[mode]
kind = "centralized"

[[schedule.segments]]
t_start = 0.0
v_ref = 240.0
r = 12.0
gammas = [1.0]
"#;

    #[test]
    fn minimal_file_resolves_with_defaults() {
        let s = ScenarioFile::parse(MINIMAL).unwrap().resolve().unwrap();
        assert_eq!(s.network.m(), 1);
        assert_eq!(s.options.ts, 2e-5);
        assert_eq!(s.options.substeps, 4);
        assert_eq!(s.network.outer, canonical_outer());
        assert_eq!(s.network.converters[0].design_inductance, 1.2e-3);
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let text = MINIMAL.replace("vg = 480.0", "vg = 480.0\ncolour = 3");
        match ScenarioFile::parse(&text) {
            Err(Error::Config { path, msg }) => {
                assert!(path.starts_with("line "), "{path}");
                assert!(msg.contains("colour"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gamma_sum_checked() {
        let text = MINIMAL.replace("gammas = [1.0]", "gammas = [0.9]");
        let err = ScenarioFile::parse(&text).unwrap().resolve().unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path.contains("gammas")), "{err}");
    }

    #[test]
    fn decentralized_needs_droop() {
        let text = MINIMAL.replace("kind = \"centralized\"", "kind = \"decentralized\"");
        assert!(ScenarioFile::parse(&text).is_err());
    }

    #[test]
    fn round_trip_through_toml() {
        let f = ScenarioFile::parse(MINIMAL).unwrap();
        assert_eq!(ScenarioFile::parse(&f.to_toml()).unwrap(), f);
    }

    #[test]
    fn load_kind_exclusive() {
        let text = MINIMAL.replace("r = 12.0", "r = 12.0\ni_load = 20.0");
        assert!(ScenarioFile::parse(&text).unwrap().resolve().is_err());
    }
}
