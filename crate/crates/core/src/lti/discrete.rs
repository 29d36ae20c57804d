use nalgebra::{DMatrix, DVector};

use super::ss::StateSpace;
use crate::error::{Error, Result};

/// Discrete-time realization `x[k+1] = A x[k] + B u[k], y[k] = C x[k] + D u[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteStateSpace {
    pub sys: StateSpace,
    pub ts: f64,
}

/// Bilinear (Tustin) discretization.
///
/// With `M = I − A·Ts/2`: `Ad = M⁻¹(I + A·Ts/2)`, `Bd = M⁻¹B·Ts`,
/// `Cd = C·M⁻¹`, `Dd = D + C·M⁻¹B·Ts/2`. The DC gain is preserved.
pub fn discretize_tustin(sys: &StateSpace, ts: f64) -> Result<DiscreteStateSpace> {
    if !(ts > 0.0 && ts.is_finite()) {
        return Err(Error::Domain(format!("sample time must be positive, got {ts}")));
    }
    let n = sys.n_states();
    let half = ts / 2.0;
    let eye = DMatrix::<f64>::identity(n, n);
    let m = &eye - &sys.a * half;
    let m_inv = m
        .try_inverse()
        .ok_or_else(|| Error::Domain("I − A·Ts/2 is singular".into()))?;
    let ad = &m_inv * (&eye + &sys.a * half);
    let bd = &m_inv * &sys.b * ts;
    let cd = &sys.c * &m_inv;
    let dd = &sys.d + &sys.c * &m_inv * &sys.b * half;
    Ok(DiscreteStateSpace {
        sys: StateSpace::new(ad, bd, cd, dd)?,
        ts,
    })
}

/// Exact zero-order-hold discretization via the augmented matrix exponential.
pub fn discretize_zoh(sys: &StateSpace, ts: f64) -> Result<DiscreteStateSpace> {
    if !(ts > 0.0 && ts.is_finite()) {
        return Err(Error::Domain(format!("sample time must be positive, got {ts}")));
    }
    let (n, m) = (sys.n_states(), sys.n_inputs());
    let mut aug = DMatrix::<f64>::zeros(n + m, n + m);
    aug.view_mut((0, 0), (n, n)).copy_from(&(&sys.a * ts));
    aug.view_mut((0, n), (n, m)).copy_from(&(&sys.b * ts));
    let e = aug.exp();
    let ad = e.view((0, 0), (n, n)).into_owned();
    let bd = e.view((0, n), (n, m)).into_owned();
    Ok(DiscreteStateSpace {
        sys: StateSpace::new(ad, bd, sys.c.clone(), sys.d.clone())?,
        ts,
    })
}

/// Samples `y(k·Ts)` of the unit step response of a SISO system, `k = 0..n`.
///
/// Exact for the continuous model since a step is held between samples.
pub fn step_response(sys: &StateSpace, ts: f64, n: usize) -> Result<Vec<f64>> {
    if sys.n_inputs() != 1 || sys.n_outputs() != 1 {
        return Err(Error::Domain("step_response needs a SISO system".into()));
    }
    let d = discretize_zoh(sys, ts)?;
    let mut r = SisoRunner::new(&d)?;
    Ok((0..n).map(|_| r.step(1.0)).collect())
}

impl DiscreteStateSpace {
    /// Steady-state gain `C(I − A)⁻¹B + D`.
    pub fn dc_gain(&self) -> Result<DMatrix<f64>> {
        let n = self.sys.n_states();
        if n == 0 {
            return Ok(self.sys.d.clone());
        }
        let m = DMatrix::<f64>::identity(n, n) - &self.sys.a;
        let x = m
            .lu()
            .solve(&self.sys.b)
            .ok_or_else(|| Error::Singular("discrete system has a pole at z = 1".into()))?;
        Ok(&self.sys.c * x + &self.sys.d)
    }

    /// Equilibrium state for a constant input: `(I − A)⁻¹ B u`.
    pub fn steady_state(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.sys.n_states();
        if n == 0 {
            return Ok(DVector::zeros(0));
        }
        let m = DMatrix::<f64>::identity(n, n) - &self.sys.a;
        m.lu()
            .solve(&(&self.sys.b * u))
            .ok_or_else(|| Error::Singular("discrete system has a pole at z = 1".into()))
    }

    /// Response to an input sequence from the zero state.
    pub fn simulate(&self, inputs: &[DVector<f64>]) -> Vec<DVector<f64>> {
        let mut runner = DiscreteRunner::new(self);
        inputs.iter().map(|u| runner.step(u)).collect()
    }
}

/// Stateful stepper for a discrete realization.
#[derive(Debug, Clone)]
pub struct DiscreteRunner {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
    x: DVector<f64>,
}

impl DiscreteRunner {
    pub fn new(dss: &DiscreteStateSpace) -> Self {
        Self {
            a: dss.sys.a.clone(),
            b: dss.sys.b.clone(),
            c: dss.sys.c.clone(),
            d: dss.sys.d.clone(),
            x: DVector::zeros(dss.sys.n_states()),
        }
    }

    pub fn state(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn set_state(&mut self, x: DVector<f64>) {
        self.x = x;
    }

    /// Emits `y[k]` and advances the state.
    pub fn step(&mut self, u: &DVector<f64>) -> DVector<f64> {
        let y = &self.c * &self.x + &self.d * u;
        self.x = &self.a * &self.x + &self.b * u;
        y
    }
}

/// Scalar-in, scalar-out stepper used by the simulator's controllers.
#[derive(Debug, Clone)]
pub struct SisoRunner {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
    d: f64,
    x: DVector<f64>,
    scratch: DVector<f64>,
}

impl SisoRunner {
    pub fn new(dss: &DiscreteStateSpace) -> Result<Self> {
        if dss.sys.n_inputs() != 1 || dss.sys.n_outputs() != 1 {
            return Err(Error::Domain("SisoRunner needs a SISO realization".into()));
        }
        let n = dss.sys.n_states();
        Ok(Self {
            a: dss.sys.a.clone(),
            b: dss.sys.b.column(0).into_owned(),
            c: dss.sys.c.row(0).transpose(),
            d: dss.sys.d[(0, 0)],
            x: DVector::zeros(n),
            scratch: DVector::zeros(n),
        })
    }

    pub fn set_state(&mut self, x: DVector<f64>) {
        self.x = x;
    }

    pub fn state(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn step(&mut self, u: f64) -> f64 {
        let y = self.c.dot(&self.x) + self.d * u;
        self.a.mul_to(&self.x, &mut self.scratch);
        self.scratch.axpy(u, &self.b, 1.0);
        std::mem::swap(&mut self.x, &mut self.scratch);
        y
    }
}
