//! Controllers, weights and closed-loop maps of the inner/outer architecture.
//!
//! The inner loop around each inductor is closed by a second-order `Kc` that
//! turns `1/(sL)` into the shaped plant
//!
//! ```text
//! G̃c(s) = ω̃/(s + ω̃) · (s² + 2ζ1ω0 s + ω0²)/(s² + 2ζ2ω0 s + ω0²)
//! ```
//!
//! a low-pass with a notch at the ripple frequency `ω0` whose depth is set by
//! `ζ1/ζ2`. The outer loop combines a voltage controller `Kv` acting on
//! `e1 = V_ref − V` and a current controller `Kr` acting on the current
//! reference error `e2`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{BlockDiagram, FrequencyGrid, Polynomial, Signal, StateSpace, TransferFunction, RIPPLE_OMEGA};

/// Tolerance on the closed inner-loop identity checked by [`design_inner`].
pub const INNER_IDENTITY_TOL: f64 = 1e-9;

/// Parameters of the shaped inner plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerDesign {
    /// Notch centre, rad/s.
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    /// Low-pass corner, rad/s.
    pub omega_tilde: f64,
}

fn default_omega0() -> f64 {
    RIPPLE_OMEGA
}

impl InnerDesign {
    pub fn new(zeta1: f64, zeta2: f64, omega_tilde: f64) -> Result<Self> {
        let d = Self {
            omega0: RIPPLE_OMEGA,
            zeta1,
            zeta2,
            omega_tilde,
        };
        d.validate()?;
        Ok(d)
    }

    /// `ζ1 = 1.2`, `ζ2 = 2.1`, `ω̃ = 2π·200` rad/s.
    pub fn case_study() -> Self {
        Self {
            omega0: RIPPLE_OMEGA,
            zeta1: 1.2,
            zeta2: 2.1,
            omega_tilde: 2.0 * PI * 200.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::Domain(format!("ω0 must be > 0, got {}", self.omega0)));
        }
        if !(self.zeta1 > 0.0 && self.zeta1 < self.zeta2 && self.zeta2.is_finite()) {
            return Err(Error::Domain(format!(
                "need 0 < ζ1 < ζ2, got ζ1 = {}, ζ2 = {}",
                self.zeta1, self.zeta2
            )));
        }
        if !(self.omega_tilde > self.omega0 && self.omega_tilde.is_finite()) {
            return Err(Error::Domain(format!(
                "need ω̃ > ω0, got ω̃ = {}, ω0 = {}",
                self.omega_tilde, self.omega0
            )));
        }
        Ok(())
    }

    /// Notch depth `ζ1/ζ2`.
    pub fn notch_ratio(&self) -> f64 {
        self.zeta1 / self.zeta2
    }

    fn quad(&self, zeta: f64) -> Polynomial {
        Polynomial::new(vec![1.0, 2.0 * zeta * self.omega0, self.omega0 * self.omega0])
    }
}

/// The shaped inner plant `G̃c` for a design.
pub fn shaped_plant(d: &InnerDesign) -> Result<TransferFunction> {
    d.validate()?;
    let num = d.quad(d.zeta1).scale(d.omega_tilde);
    let den = &Polynomial::new(vec![1.0, d.omega_tilde]) * &d.quad(d.zeta2);
    TransferFunction::new(num, den)
}

/// Inductor plant `1/(sL)`.
pub fn inductor_plant(inductance: f64) -> Result<TransferFunction> {
    if !(inductance > 0.0) {
        return Err(Error::Domain(format!("inductance must be > 0, got {inductance}")));
    }
    TransferFunction::integrator(inductance)
}

/// Bus plant `Gv = 1/(sC)`.
pub fn bus_plant(capacitance: f64) -> Result<TransferFunction> {
    if !(capacitance > 0.0) {
        return Err(Error::Domain(format!("capacitance must be > 0, got {capacitance}")));
    }
    TransferFunction::integrator(capacitance)
}

/// Second-order inner controller
/// `Kc = Lω̃ (s² + 2ζ1ω0 s + ω0²)/(s² + 2ζ2ω0 s + ω0² + 2(ζ2 − ζ1)ω0ω̃)`.
///
/// Verifies that closing `Kc/(sL)` reproduces [`shaped_plant`].
pub fn design_inner(inductance: f64, d: &InnerDesign) -> Result<TransferFunction> {
    d.validate()?;
    let plant = inductor_plant(inductance)?;
    let num = d.quad(d.zeta1).scale(inductance * d.omega_tilde);
    let den = Polynomial::new(vec![
        1.0,
        2.0 * d.zeta2 * d.omega0,
        d.omega0 * d.omega0 + 2.0 * (d.zeta2 - d.zeta1) * d.omega0 * d.omega_tilde,
    ]);
    let kc = TransferFunction::new(num, den)?;
    let closed = kc.series(&plant).feedback()?;
    let target = shaped_plant(d)?;
    let dist = closed.coeff_distance(&target);
    if dist > INNER_IDENTITY_TOL {
        return Err(Error::Numerical(format!(
            "inner loop does not reproduce the shaped plant (coefficient distance {dist:e})"
        )));
    }
    Ok(kc)
}

/// Outer voltage and current controllers.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterControllers {
    pub kv: TransferFunction,
    pub kr: TransferFunction,
}

impl OuterControllers {
    pub fn zero() -> Self {
        Self {
            kv: TransferFunction::zero(),
            kr: TransferFunction::zero(),
        }
    }
}

fn lin(c: f64) -> Polynomial {
    Polynomial::new(vec![1.0, c])
}

fn quad(b: f64, c: f64) -> Polynomial {
    Polynomial::new(vec![1.0, b, c])
}

/// The canonical sixth-order outer controllers, expanded from their
/// factored forms.
pub fn canonical_outer() -> OuterControllers {
    let kv = TransferFunction::from_factors(
        -0.0076,
        &[lin(-8.69e5), lin(2.01e4), lin(2577.0), lin(194.2), quad(0.02, 0.0001)],
        &[lin(2.73e4), lin(1.07e4), lin(433.9), lin(2.498), quad(0.01978, 0.0008)],
    )
    .expect("static controller data");
    let kr = TransferFunction::from_factors(
        0.065,
        &[lin(4.07e5), lin(2474.0), lin(191.7), lin(3.20), lin(0.01), lin(0.0099)],
        &[lin(1.15e4), lin(422.4), lin(3.11), lin(2.03), quad(0.01978, 0.0008)],
    )
    .expect("static controller data");
    OuterControllers { kv, kr }
}

/// Performance weights of the stacked problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    pub w1: TransferFunction,
    pub w2: TransferFunction,
    pub w3: TransferFunction,
    pub w4: TransferFunction,
}

/// High-pass `k·s/(s + ω_h)`.
pub fn high_pass(k: f64, omega_h: f64) -> Result<TransferFunction> {
    TransferFunction::new(Polynomial::new(vec![k, 0.0]), lin(omega_h))
}

/// Default `W4 = 0.5·s/(s + 2π·500)`.
pub fn default_w4() -> TransferFunction {
    high_pass(0.5, 2.0 * PI * 500.0).expect("static weight")
}

/// `W1 = 0.5(s+502.7)/(s+2.513)`, `W2 = 0.5(s+628.3)/(s+3.142)`, `W3 = 0.1`
/// and the default high-pass `W4`.
// 3.142 is a rounded corner frequency, not π.
#[allow(clippy::approx_constant)]
pub fn canonical_weights() -> WeightSet {
    let w = |z: f64, p: f64| TransferFunction::new(lin(z).scale(0.5), lin(p)).expect("static weight");
    WeightSet {
        w1: w(502.7, 2.513),
        w2: w(628.3, 3.142),
        w3: TransferFunction::gain(0.1),
        w4: default_w4(),
    }
}

/// The 6×3 generalized plant from `[V_ref, i_load, u]` to
/// `[z1, z2, z3, z4, e1, e2]`, together with the blocks it was built from.
#[derive(Debug, Clone)]
pub struct GeneralizedPlant {
    pub gv: TransferFunction,
    pub gc: TransferFunction,
    pub weights: WeightSet,
    pub entries: [[TransferFunction; 3]; 6],
}

impl GeneralizedPlant {
    pub const N_REGULATED: usize = 4;
    pub const N_MEASURED: usize = 2;
    pub const N_EXOGENOUS: usize = 2;

    pub fn entry(&self, row: usize, col: usize) -> &TransferFunction {
        &self.entries[row][col]
    }

    /// Closed-loop `[V_ref, i_load] → z` response at `jω` by the lower
    /// fractional transformation of the entries with `u = Kv·e1 + Kr·e2`.
    pub fn closed_loop_response(&self, k: &OuterControllers, omega: f64) -> Result<DMatrix<Complex64>> {
        let e = |r: usize, c: usize| self.entries[r][c].freq_response(omega);
        let kv = k.kv.freq_response(omega)?;
        let kr = k.kr.freq_response(omega)?;
        let k_row = [kv, kr];
        let mut kp22 = Complex64::new(0.0, 0.0);
        for (i, kk) in k_row.iter().enumerate() {
            kp22 += kk * e(4 + i, 2)?;
        }
        let denom = Complex64::new(1.0, 0.0) - kp22;
        if denom.norm() == 0.0 {
            return Err(Error::Singular("ill-posed loop 1 − K·P22 = 0".into()));
        }
        let mut out = DMatrix::zeros(4, 2);
        for col in 0..2 {
            let mut kp21 = Complex64::new(0.0, 0.0);
            for (i, kk) in k_row.iter().enumerate() {
                kp21 += kk * e(4 + i, col)?;
            }
            let u = kp21 / denom;
            for row in 0..4 {
                out[(row, col)] = e(row, col)? + e(row, 2)? * u;
            }
        }
        Ok(out)
    }
}

/// Fills the stacked plant pattern:
///
/// ```text
/// [ W1   W1·Gv   −W1·Gv·G̃c ]
/// [ 0    W2      −W2·G̃c    ]
/// [ 0    0        W3       ]
/// [ 0   −W4·Gv    W4·Gv·G̃c ]
/// [ 1    Gv      −Gv·G̃c    ]
/// [ 0    1       −G̃c       ]
/// ```
pub fn generalized_plant(gv: &TransferFunction, gc: &TransferFunction, w: &WeightSet) -> GeneralizedPlant {
    let zero = TransferFunction::zero;
    let one = TransferFunction::gain(1.0);
    let gvgc = gv.series(gc);
    let entries = [
        [w.w1.clone(), w.w1.series(gv), w.w1.series(&gvgc).neg()],
        [zero(), w.w2.clone(), w.w2.series(gc).neg()],
        [zero(), zero(), w.w3.clone()],
        [zero(), w.w4.series(gv).neg(), w.w4.series(&gvgc)],
        [one.clone(), gv.clone(), gvgc.neg()],
        [zero(), one, gc.neg()],
    ];
    GeneralizedPlant {
        gv: gv.clone(),
        gc: gc.clone(),
        weights: w.clone(),
        entries,
    }
}

/// Realization of the closed-loop map `[V_ref, i_load] → [z1..z4]`.
///
/// The loop is assembled from the component blocks (`Gv`, `G̃c`, `W1..W4`,
/// `Kv`, `Kr`) rather than from the expanded entries, which keeps the
/// realization minimal. Fails with [`Error::Unstable`] when any closed-loop
/// pole has a nonnegative real part.
pub fn weighted_closed_loop(gp: &GeneralizedPlant, k: &OuterControllers) -> Result<StateSpace> {
    let mut bd = BlockDiagram::new(2);
    let (vref, iload) = (Signal::External(0), Signal::External(1));
    let gc = bd.add_tf(&gp.gc)?;
    let gv = bd.add_tf(&gp.gv)?;
    let kv = bd.add_tf(&k.kv)?;
    let kr = bd.add_tf(&k.kr)?;
    let w1 = bd.add_tf(&gp.weights.w1)?;
    let w2 = bd.add_tf(&gp.weights.w2)?;
    let w3 = bd.add_tf(&gp.weights.w3)?;
    let w4 = bd.add_tf(&gp.weights.w4)?;
    let il = Signal::Block(gc, 0);
    let v = Signal::Block(gv, 0);
    // u = Kv·e1 + Kr·e2 drives the shaped plant.
    bd.feed(gc, 0, Signal::Block(kv, 0), 1.0);
    bd.feed(gc, 0, Signal::Block(kr, 0), 1.0);
    bd.feed(gv, 0, il, 1.0);
    bd.feed(gv, 0, iload, -1.0);
    // e1 = V_ref − V
    for blk in [kv, w1] {
        bd.feed(blk, 0, vref, 1.0);
        bd.feed(blk, 0, v, -1.0);
    }
    // e2 = i_load − iL
    for blk in [kr, w2] {
        bd.feed(blk, 0, iload, 1.0);
        bd.feed(blk, 0, il, -1.0);
    }
    bd.feed(w3, 0, Signal::Block(kv, 0), 1.0);
    bd.feed(w3, 0, Signal::Block(kr, 0), 1.0);
    bd.feed(w4, 0, v, 1.0);
    for blk in [w1, w2, w3, w4] {
        bd.output(&[(Signal::Block(blk, 0), 1.0)]);
    }
    let cl = bd.build()?;
    let unstable = cl.unstable_poles()?;
    if !unstable.is_empty() {
        return Err(Error::Unstable { poles: unstable });
    }
    Ok(cl)
}

/// Closed-loop maps of the single-converter loop.
#[derive(Debug, Clone)]
pub struct SensitivityFamily {
    /// `1/(1 + G̃cKr + GvG̃cKv)`
    pub s1: TransferFunction,
    /// `GvG̃cKv·S1`
    pub t1: TransferFunction,
    /// `1/(1 + G̃cKr)`
    pub s2: TransferFunction,
    /// `1 − S2`
    pub t2: TransferFunction,
    /// `G̃cKv·S1`
    pub h: TransferFunction,
}

/// Builds the family over explicit common denominators so that no factor
/// appears on both sides of a fraction.
pub fn sensitivity_family(gv: &TransferFunction, gc: &TransferFunction, k: &OuterControllers) -> Result<SensitivityFamily> {
    let (ngv, dgv) = (gv.num(), gv.den());
    let (ng, dg) = (gc.num(), gc.den());
    let (nv, dv) = (k.kv.num(), k.kv.den());
    let (nr, dr) = (k.kr.num(), k.kr.den());

    let dg_dr = dg * dr;
    let ng_nr = ng * nr;
    let current_den = &dg_dr + &ng_nr;
    let s1_num = &(&dg_dr * dv) * dgv;
    let t1_num = &(&(ngv * ng) * nv) * dr;
    let h_num = &(&(ng * nv) * dr) * dgv;
    let voltage_den = &(&s1_num + &(&(&ng_nr * dv) * dgv)) + &t1_num;
    if voltage_den.is_zero() || current_den.is_zero() {
        return Err(Error::Singular("sensitivity denominator vanishes".into()));
    }
    Ok(SensitivityFamily {
        s1: TransferFunction::new(s1_num, voltage_den.clone())?,
        t1: TransferFunction::new(t1_num, voltage_den.clone())?,
        s2: TransferFunction::new(dg_dr, current_den.clone())?,
        t2: TransferFunction::new(ng_nr, current_den)?,
        h: TransferFunction::new(h_num, voltage_den)?,
    })
}

/// Summary of how close `Kr` is to a constant multiple of `Kv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioAnalysis {
    /// Median of `|Kr(jω)/Kv(jω)|` over the grid.
    pub alpha: f64,
    /// Median of `Re(Kr(jω)/Kv(jω))`; carries the sign of the ratio.
    pub alpha_signed: f64,
    /// Largest relative deviation of `|Kr/Kv|` from `alpha`.
    pub flatness: f64,
}

/// Per-frequency ratio `Kr(jω)/Kv(jω)`.
pub fn controller_ratio(k: &OuterControllers, omega: f64) -> Result<Complex64> {
    let kv = k.kv.freq_response(omega)?;
    if kv.norm() == 0.0 {
        return Err(Error::Singular(format!("Kv vanishes at ω = {omega}")));
    }
    Ok(k.kr.freq_response(omega)? / kv)
}

pub fn controller_ratio_analysis(k: &OuterControllers, grid: &FrequencyGrid) -> Result<RatioAnalysis> {
    let ratios = grid
        .omegas()
        .iter()
        .map(|&w| controller_ratio(k, w))
        .collect::<Result<Vec<_>>>()?;
    let alpha = median(ratios.iter().map(|r| r.norm()).collect());
    let alpha_signed = median(ratios.iter().map(|r| r.re).collect());
    let flatness = if alpha == 0.0 {
        0.0
    } else {
        ratios
            .iter()
            .map(|r| (r.norm() - alpha).abs() / alpha)
            .fold(0.0, f64::max)
    };
    Ok(RatioAnalysis {
        alpha,
        alpha_signed,
        flatness,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Droop compensation filter `F(s) = 376.99/(s + 314.16)`.
pub fn droop_filter() -> TransferFunction {
    TransferFunction::from_coeffs(&[376.99], &[1.0, 314.16]).expect("static filter")
}
