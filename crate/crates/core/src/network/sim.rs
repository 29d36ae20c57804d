//! Sampled-data simulation of the averaged network.
//!
//! Controllers run at the sample period `Ts` as Tustin discretizations. The
//! continuous plant (inductor currents and bus voltage) is integrated with
//! classical RK4 over `substeps` sub-intervals per sample while each `ũ_k`
//! is held.

use nalgebra::{DMatrix, DVector};

use crate::converter::{
    bus_derivative, control_from_duty, duty_from_control, inductor_derivative, BranchCurrent, BusState, Load, Topology,
};
use crate::design::design_inner;
use crate::error::{Error, Result};
use crate::lti::{discretize_tustin, DiscreteStateSpace, SisoRunner, StateSpace, TransferFunction};

use super::config::{Mode, NetworkConfig, Schedule};

/// States larger than this are treated as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// Exact DC equilibrium of the first segment, controllers included.
    Equilibrium,
    /// Plant and controller states all zero.
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub duration: f64,
    pub ts: f64,
    pub substeps: usize,
    pub init: Init,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            duration: 0.6,
            ts: 2e-5,
            substeps: 4,
            init: Init::Equilibrium,
        }
    }
}

/// A sample at which the requested duty fell outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationEvent {
    pub sample: usize,
    pub converter: usize,
    pub requested_u_tilde: f64,
    pub applied_u_tilde: f64,
}

/// Uniformly sampled trajectories; `il[k][n]` is converter `k` at sample `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub ts: f64,
    pub t: Vec<f64>,
    pub vdc: Vec<f64>,
    pub iload: Vec<f64>,
    pub il: Vec<Vec<f64>>,
    pub duty: Vec<Vec<f64>>,
    pub u_tilde: Vec<Vec<f64>>,
    pub e1: Vec<f64>,
    pub e2: Vec<Vec<f64>>,
    pub saturation: Vec<SaturationEvent>,
}

impl SimResult {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn m(&self) -> usize {
        self.il.len()
    }

    /// Sample index range `[start, end)` covering `[t0, t1)`.
    pub fn index_range(&self, t0: f64, t1: f64) -> (usize, usize) {
        let idx = |t: f64| ((t / self.ts) - 1e-9).ceil().clamp(0.0, self.len() as f64) as usize;
        (idx(t0), idx(t1))
    }

    /// Total current delivered by the converters at each sample.
    pub fn total_il(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.il.iter().map(|c| c[n]).sum()).collect()
    }
}

/// Validated network with its continuous controllers, ready to simulate.
#[derive(Debug, Clone)]
pub struct SimEngine {
    cfg: NetworkConfig,
    kc: Vec<TransferFunction>,
    kv: Vec<TransferFunction>,
}

pub fn build_network(cfg: &NetworkConfig) -> Result<SimEngine> {
    cfg.validate()?;
    let kc = cfg
        .converters
        .iter()
        .enumerate()
        .map(|(k, c)| {
            design_inner(c.design_inductance, &c.inner)
                .map_err(|e| Error::config(format!("network.converters[{k}].inner"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let kv = (0..cfg.m()).map(|k| cfg.kv_of(k)).collect();
    Ok(SimEngine { cfg: cfg.clone(), kc, kv })
}

struct Controller {
    dss: DiscreteStateSpace,
    runner: SisoRunner,
}

impl Controller {
    fn new(g: &TransferFunction, ts: f64) -> Result<Self> {
        let dss = discretize_tustin(&StateSpace::from_tf(g)?.balanced_scaling(), ts)?;
        let runner = SisoRunner::new(&dss)?;
        Ok(Self { dss, runner })
    }

    fn settle(&mut self, u: f64) -> Result<()> {
        let x = self.dss.steady_state(&DVector::from_element(1, u))?;
        self.runner.set_state(x);
        Ok(())
    }

    fn dc_gain(&self) -> Result<f64> {
        Ok(self.dss.dc_gain()?[(0, 0)])
    }
}

struct ConverterLoop {
    kc: Controller,
    kv: Controller,
    kr: Controller,
}

/// DC operating point: bus voltage and inductor currents.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint {
    pub v: f64,
    pub il: Vec<f64>,
}

impl SimEngine {
    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn inner_controllers(&self) -> &[TransferFunction] {
        &self.kc
    }

    /// Solves the DC equations of the closed network for one segment
    /// (load ripple excluded), using the controllers' DC gains.
    pub fn equilibrium(&self, schedule: &Schedule, segment: usize) -> Result<OperatingPoint> {
        let seg = &schedule.segments[segment];
        let m = self.cfg.m();
        let kr0 = self.cfg.outer.kr.dc_gain()?;
        let (i0, g) = match seg.load {
            Load::Current { dc, .. } => (dc, 0.0),
            Load::Resistive { ohms } => (0.0, 1.0 / ohms),
        };
        let f0 = match &self.cfg.mode {
            Mode::Decentralized { droop } => droop.dc_gain()?,
            Mode::Centralized => 0.0,
        };
        // Unknowns [V, iL_1..iL_m]; rows 0..m are the controller balances
        // iL_k = u_k, row m is the bus current balance.
        let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
        let mut rhs = DVector::<f64>::zeros(m + 1);
        for k in 0..m {
            let kv0 = self.kv[k].dc_gain()?;
            let dp = self.cfg.converters[k].params.delivery_factor();
            a[(k, k + 1)] = 1.0 + kr0 * dp;
            match self.cfg.mode {
                Mode::Centralized => {
                    a[(k, 0)] = kv0 - kr0 * seg.gammas[k] * g;
                    rhs[k] = kv0 * seg.v_ref + kr0 * seg.gammas[k] * i0;
                }
                Mode::Decentralized { .. } => {
                    a[(k, 0)] = kv0 + kr0 * f0;
                    rhs[k] = (kv0 + kr0 * f0) * seg.v_ref + kr0 * seg.i_refs[k];
                }
            }
            a[(m, k + 1)] = dp;
        }
        a[(m, 0)] = -g;
        rhs[m] = i0;
        let x = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("network DC equations are singular".into()))?;
        Ok(OperatingPoint {
            v: x[0],
            il: x.iter().skip(1).copied().collect(),
        })
    }

    pub fn simulate(&self, schedule: &Schedule, opts: &SimOptions) -> Result<SimResult> {
        let cfg = &self.cfg;
        let m = cfg.m();
        schedule.validate(cfg)?;
        if !(opts.ts > 0.0 && opts.ts.is_finite()) {
            return Err(Error::config("sim.ts", format!("must be > 0, got {}", opts.ts)));
        }
        if opts.substeps == 0 {
            return Err(Error::config("sim.substeps", "must be >= 1"));
        }
        if !(opts.duration >= opts.ts) {
            return Err(Error::config("sim.duration", "must be at least one sample period"));
        }
        let ts = opts.ts;
        let n_samples = (opts.duration / ts).round() as usize;

        let mut loops = (0..m)
            .map(|k| {
                Ok(ConverterLoop {
                    kc: Controller::new(&self.kc[k], ts)?,
                    kv: Controller::new(&self.kv[k], ts)?,
                    kr: Controller::new(&cfg.outer.kr, ts)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut droop = match &cfg.mode {
            Mode::Decentralized { droop } => Some(Controller::new(droop, ts)?),
            Mode::Centralized => None,
        };
        let delivery: Vec<f64> = cfg.converters.iter().map(|c| c.params.delivery_factor()).collect();

        // Segment `i` takes effect at the first sample with t ≥ t_start.
        let seg_start: Vec<usize> = schedule
            .segments
            .iter()
            .map(|s| ((s.t_start / ts) - 1e-9).ceil().max(0.0) as usize)
            .collect();

        let (mut v, mut il) = match opts.init {
            Init::Cold => (0.0, vec![0.0; m]),
            Init::Equilibrium => {
                let op = self.equilibrium(schedule, 0)?;
                let seg = &schedule.segments[0];
                let e1 = seg.v_ref - op.v;
                let iload = seg.load.current(0.0, op.v);
                let f = match droop.as_mut() {
                    Some(d) => {
                        d.settle(e1)?;
                        d.dc_gain()? * e1
                    }
                    None => 0.0,
                };
                for (k, lp) in loops.iter_mut().enumerate() {
                    let e2 = reference(&cfg.mode, seg.gammas.get(k), seg.i_refs.get(k), iload, f) - delivery[k] * op.il[k];
                    lp.kv.settle(e1)?;
                    lp.kr.settle(e2)?;
                    // Kc sees u − iL = 0 at equilibrium.
                    lp.kc.settle(0.0)?;
                }
                (op.v, op.il)
            }
        };

        let mut out = SimResult {
            ts,
            t: Vec::with_capacity(n_samples),
            vdc: Vec::with_capacity(n_samples),
            iload: Vec::with_capacity(n_samples),
            il: vec![Vec::with_capacity(n_samples); m],
            duty: vec![Vec::with_capacity(n_samples); m],
            u_tilde: vec![Vec::with_capacity(n_samples); m],
            e1: Vec::with_capacity(n_samples),
            e2: vec![Vec::with_capacity(n_samples); m],
            saturation: Vec::new(),
        };
        let mut held_u = vec![0.0; m];
        let mut held_dp = vec![0.0; m];
        let mut seg_idx = 0;
        let mut branches = Vec::with_capacity(m);

        for n in 0..n_samples {
            let t = n as f64 * ts;
            while seg_idx + 1 < seg_start.len() && seg_start[seg_idx + 1] <= n {
                seg_idx += 1;
            }
            let seg = &schedule.segments[seg_idx];
            let iload = seg.load.current(t, v);
            let e1 = seg.v_ref - v;
            let f = droop.as_mut().map_or(0.0, |d| d.runner.step(e1));

            out.t.push(t);
            out.vdc.push(v);
            out.iload.push(iload);
            out.e1.push(e1);
            for k in 0..m {
                let lp = &mut loops[k];
                let params = &cfg.converters[k].params;
                let e2 = reference(&cfg.mode, seg.gammas.get(k), seg.i_refs.get(k), iload, f) - delivery[k] * il[k];
                let u = lp.kv.runner.step(e1) + lp.kr.runner.step(e2);
                let requested = lp.kc.runner.step(u - il[k]);
                if !requested.is_finite() || requested.abs() > DIVERGENCE_LIMIT {
                    return Err(Error::Divergence {
                        last_valid: n,
                        time: t,
                        msg: format!("controller output of converter {} left the finite range ({requested:e})", k + 1),
                    });
                }
                let duty = duty_from_control(params, requested, v).map_err(|e| Error::Divergence {
                    last_valid: n,
                    time: t,
                    msg: e.to_string(),
                })?;
                let applied = if duty.saturated {
                    let a = control_from_duty(params, duty.d, v);
                    out.saturation.push(SaturationEvent {
                        sample: n,
                        converter: k,
                        requested_u_tilde: requested,
                        applied_u_tilde: a,
                    });
                    a
                } else {
                    requested
                };
                held_u[k] = applied;
                held_dp[k] = match params.topology {
                    Topology::Buck => 1.0,
                    Topology::Boost => 1.0 - duty.d,
                };
                out.il[k].push(il[k]);
                out.duty[k].push(duty.d);
                out.u_tilde[k].push(applied);
                out.e2[k].push(e2);
            }

            let h = ts / opts.substeps as f64;
            for j in 0..opts.substeps {
                let t0 = t + j as f64 * h;
                self.rk4_step(&mut v, &mut il, &held_u, &held_dp, &seg.load, t0, h, &mut branches);
            }
            if !v.is_finite() || v.abs() > DIVERGENCE_LIMIT || il.iter().any(|x| !x.is_finite() || x.abs() > DIVERGENCE_LIMIT) {
                return Err(Error::Divergence {
                    last_valid: n,
                    time: t,
                    msg: format!("plant state left the finite range (V = {v:e})"),
                });
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn rk4_step(&self, v: &mut f64, il: &mut [f64], u: &[f64], dp: &[f64], load: &Load, t: f64, h: f64, branches: &mut Vec<BranchCurrent>) {
        let cfg = &self.cfg;
        let m = il.len();
        let mut deriv = |t: f64, v: f64, il: &[f64], dil: &mut [f64]| -> f64 {
            branches.clear();
            for k in 0..m {
                let params = &cfg.converters[k].params;
                dil[k] = inductor_derivative(params, u[k]);
                branches.push(BranchCurrent {
                    topology: params.topology,
                    d_prime: dp[k],
                    il: il[k],
                });
            }
            bus_derivative(&BusState { v, c: cfg.bus_c }, branches, load.current(t, v))
        };
        let mut k1 = vec![0.0; m];
        let mut k2 = vec![0.0; m];
        let mut k3 = vec![0.0; m];
        let mut k4 = vec![0.0; m];
        let mut tmp = vec![0.0; m];
        let dv1 = deriv(t, *v, il, &mut k1);
        for k in 0..m {
            tmp[k] = il[k] + 0.5 * h * k1[k];
        }
        let dv2 = deriv(t + 0.5 * h, *v + 0.5 * h * dv1, &tmp, &mut k2);
        for k in 0..m {
            tmp[k] = il[k] + 0.5 * h * k2[k];
        }
        let dv3 = deriv(t + 0.5 * h, *v + 0.5 * h * dv2, &tmp, &mut k3);
        for k in 0..m {
            tmp[k] = il[k] + h * k3[k];
        }
        let dv4 = deriv(t + h, *v + h * dv3, &tmp, &mut k4);
        *v += h / 6.0 * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4);
        for k in 0..m {
            il[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
    }
}

fn reference(mode: &Mode, gamma: Option<&f64>, i_ref: Option<&f64>, iload: f64, droop_out: f64) -> f64 {
    match mode {
        Mode::Centralized => gamma.copied().unwrap_or(0.0) * iload,
        Mode::Decentralized { .. } => i_ref.copied().unwrap_or(0.0) + droop_out,
    }
}
