//! Cycle-averaged buck and boost converter models in continuous conduction.
//!
//! Both topologies are written in terms of the synthetic control voltage
//! `ũ`, which makes the inductor dynamics identical: `L·diL/dt = ũ`.
//! The topologies differ only in how `ũ` maps to a duty cycle and in the
//! current delivered to the bus (`iL` for buck, `D′·iL` for boost).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Buck,
    Boost,
}

/// Electrical parameters of one converter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterParams {
    pub topology: Topology,
    /// Inductance, H.
    pub inductance: f64,
    /// Source voltage, V.
    pub vg: f64,
    /// Nominal `D′ = Vg/V_ref` (boost only; 1 for buck).
    pub d_prime: f64,
}

impl ConverterParams {
    pub fn buck(inductance: f64, vg: f64) -> Result<Self> {
        let p = Self {
            topology: Topology::Buck,
            inductance,
            vg,
            d_prime: 1.0,
        };
        p.check_common()?;
        Ok(p)
    }

    /// Boost stage regulating to `v_ref`, which fixes `D′ = vg / v_ref`.
    pub fn boost(inductance: f64, vg: f64, v_ref: f64) -> Result<Self> {
        let p = Self {
            topology: Topology::Boost,
            inductance,
            vg,
            d_prime: vg / v_ref,
        };
        p.check_common()?;
        p.validate_for(v_ref)?;
        Ok(p)
    }

    fn check_common(&self) -> Result<()> {
        if !(self.inductance > 0.0 && self.inductance.is_finite()) {
            return Err(Error::Domain(format!("inductance must be > 0, got {}", self.inductance)));
        }
        if !(self.vg > 0.0 && self.vg.is_finite()) {
            return Err(Error::Domain(format!("Vg must be > 0, got {}", self.vg)));
        }
        Ok(())
    }

    /// Step-down / step-up consistency against the regulated voltage.
    pub fn validate_for(&self, v_ref: f64) -> Result<()> {
        self.check_common()?;
        match self.topology {
            Topology::Buck if v_ref >= self.vg => Err(Error::Domain(format!(
                "buck needs V_ref < Vg ({v_ref} >= {})",
                self.vg
            ))),
            Topology::Boost if v_ref <= self.vg => Err(Error::Domain(format!(
                "boost needs V_ref > Vg ({v_ref} <= {})",
                self.vg
            ))),
            Topology::Boost if !(self.d_prime > 0.0 && self.d_prime < 1.0) => {
                Err(Error::Domain(format!("boost needs 0 < D' < 1, got {}", self.d_prime)))
            }
            _ => Ok(()),
        }
    }

    /// Factor from inductor current to current delivered to the bus.
    pub fn delivery_factor(&self) -> f64 {
        match self.topology {
            Topology::Buck => 1.0,
            Topology::Boost => self.d_prime,
        }
    }
}

/// Inductor current state, A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterState {
    pub il: f64,
}

/// Shared DC-link state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BusState {
    /// Bus voltage, V.
    pub v: f64,
    /// Bus capacitance, F.
    pub c: f64,
}

/// One converter's contribution to the bus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCurrent {
    pub topology: Topology,
    pub d_prime: f64,
    pub il: f64,
}

impl BranchCurrent {
    pub fn effective(&self) -> f64 {
        match self.topology {
            Topology::Buck => self.il,
            Topology::Boost => self.d_prime * self.il,
        }
    }
}

/// `diL/dt = ũ/L`, A/s.
pub fn inductor_derivative(params: &ConverterParams, u_tilde: f64) -> f64 {
    u_tilde / params.inductance
}

/// `dV/dt = (Σ effective currents − i_load)/C`, V/s.
pub fn bus_derivative(bus: &BusState, currents: &[BranchCurrent], i_load: f64) -> f64 {
    let supplied: f64 = currents.iter().map(BranchCurrent::effective).sum();
    (supplied - i_load) / bus.c
}

/// Duty cycle recovered from `ũ`, with a saturation flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Duty {
    /// Switch on-time fraction `d ∈ [0, 1]`.
    pub d: f64,
    pub saturated: bool,
}

/// Buck: `d = (ũ + V)/Vg`. Boost: `d′ = (Vg − ũ)/V`, `d = 1 − d′`.
/// Both are clamped to `[0, 1]`.
pub fn duty_from_control(params: &ConverterParams, u_tilde: f64, v: f64) -> Result<Duty> {
    let raw = match params.topology {
        Topology::Buck => (u_tilde + v) / params.vg,
        Topology::Boost => {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("boost duty needs V > 0, got {v}")));
            }
            1.0 - (params.vg - u_tilde) / v
        }
    };
    let d = raw.clamp(0.0, 1.0);
    Ok(Duty {
        d,
        saturated: d != raw,
    })
}

/// `ũ` actually produced by duty `d` at bus voltage `v` (raw averaged form).
pub fn control_from_duty(params: &ConverterParams, duty: f64, v: f64) -> f64 {
    match params.topology {
        Topology::Buck => -v + duty * params.vg,
        Topology::Boost => params.vg - (1.0 - duty) * v,
    }
}

/// Load seen by the DC link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Load {
    /// Prescribed current `i_dc + a·sin(2πft)`.
    Current {
        dc: f64,
        #[serde(default)]
        ripple_amplitude: f64,
        #[serde(default = "default_ripple_hz")]
        ripple_hz: f64,
    },
    /// Resistor across the bus, `i = V/R`.
    Resistive { ohms: f64 },
}

fn default_ripple_hz() -> f64 {
    120.0
}

impl Load {
    pub fn current(&self, t: f64, v: f64) -> f64 {
        match *self {
            Load::Current {
                dc,
                ripple_amplitude,
                ripple_hz,
            } => dc + ripple_amplitude * (2.0 * PI * ripple_hz * t).sin(),
            Load::Resistive { ohms } => v / ohms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Load::Resistive { ohms } if !(ohms > 0.0 && ohms.is_finite()) => {
                Err(Error::Domain(format!("load resistance must be > 0, got {ohms}")))
            }
            Load::Current { dc, ripple_amplitude, ripple_hz }
                if !(dc.is_finite() && ripple_amplitude.is_finite() && ripple_hz >= 0.0) =>
            {
                Err(Error::Domain("current load terms must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Draws multiplicative factors uniformly in `[1 − f, 1 + f]` from a seeded
/// stream, so the same seed reproduces the same parameter set.
#[derive(Debug, Clone)]
pub struct Perturber {
    fraction: f64,
    rng: ChaCha8Rng,
}

impl Perturber {
    pub fn new(fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&fraction) {
            return Err(Error::Domain(format!("perturbation fraction must be in [0, 1), got {fraction}")));
        }
        Ok(Self {
            fraction,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn scale(&mut self, value: f64) -> f64 {
        if self.fraction == 0.0 {
            return value;
        }
        value * self.rng.random_range(1.0 - self.fraction..=1.0 + self.fraction)
    }

    /// Scales the inductance; topology, Vg and D′ are untouched.
    pub fn params(&mut self, params: &ConverterParams) -> ConverterParams {
        ConverterParams {
            inductance: self.scale(params.inductance),
            ..*params
        }
    }
}

/// Single-shot inductance perturbation.
pub fn perturb_params(params: &ConverterParams, fraction: f64, seed: u64) -> Result<ConverterParams> {
    Ok(Perturber::new(fraction, seed)?.params(params))
}
