use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eig;
use super::poly::Polynomial;
use super::tf::TransferFunction;
use crate::error::{Error, Result};

/// Continuous-time (or, after discretization, discrete-time) realization
/// `ẋ = Ax + Bu, y = Cx + Du`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Domain(format!("A must be square, got {}x{}", n, a.ncols())));
        }
        if b.nrows() != n || c.ncols() != n {
            return Err(Error::Domain(format!(
                "B is {}x{}, C is {}x{} for n = {n}",
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols()
            )));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::Domain(format!(
                "D must be {}x{}, got {}x{}",
                c.nrows(),
                b.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// A memoryless gain matrix.
    pub fn static_gain(d: DMatrix<f64>) -> Self {
        let (p, m) = d.shape();
        Self {
            a: DMatrix::zeros(0, 0),
            b: DMatrix::zeros(0, m),
            c: DMatrix::zeros(p, 0),
            d,
        }
    }

    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.c.nrows()
    }

    /// Controllable canonical realization of a proper SISO transfer function.
    pub fn from_tf(g: &TransferFunction) -> Result<Self> {
        if !g.is_proper() {
            return Err(Error::Domain("improper transfer function has no realization".into()));
        }
        let den = g.den().coeffs();
        let n = g.den().degree();
        let mut num = vec![0.0; n + 1];
        let nc = g.num().coeffs();
        num[n + 1 - nc.len()..].copy_from_slice(nc);
        // den is monic; split off the direct feedthrough.
        let dterm = num[0];
        let rem: Vec<f64> = (1..=n).map(|i| num[i] - dterm * den[i]).collect();
        let mut a = DMatrix::zeros(n, n);
        for j in 0..n {
            a[(0, j)] = -den[j + 1];
        }
        for i in 1..n {
            a[(i, i - 1)] = 1.0;
        }
        let mut b = DMatrix::zeros(n, 1);
        if n > 0 {
            b[(0, 0)] = 1.0;
        }
        let c = DMatrix::from_row_slice(1, n, &rem);
        let d = DMatrix::from_element(1, 1, dterm);
        Self::new(a, b, c, d)
    }

    /// Transfer function of a SISO realization, using
    /// `num = det(sI − A + BC) − det(sI − A) + D·det(sI − A)`.
    pub fn to_tf(&self) -> Result<TransferFunction> {
        if self.n_inputs() != 1 || self.n_outputs() != 1 {
            return Err(Error::Domain("to_tf needs a SISO realization".into()));
        }
        let d = self.d[(0, 0)];
        if self.n_states() == 0 {
            return Ok(TransferFunction::gain(d));
        }
        let den = charpoly(&self.a)?;
        let closed = &self.a - &self.b * &self.c;
        let cl = charpoly(&closed)?;
        let num = &(&cl - &den) + &den.scale(d);
        TransferFunction::new(num, den)
    }

    /// `G(jω) = C(jωI − A)⁻¹B + D`.
    pub fn freq_response(&self, omega: f64) -> Result<DMatrix<Complex64>> {
        self.eval(Complex64::new(0.0, omega))
    }

    pub fn eval(&self, s: Complex64) -> Result<DMatrix<Complex64>> {
        let n = self.n_states();
        let dc = self.d.map(|v| Complex64::new(v, 0.0));
        if n == 0 {
            return Ok(dc);
        }
        let a = self.a.map(|v| Complex64::new(v, 0.0));
        let m = DMatrix::<Complex64>::identity(n, n) * s - a;
        let b = self.b.map(|v| Complex64::new(v, 0.0));
        let x = m
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Singular(format!("sI − A singular at s = {s}")))?;
        let c = self.c.map(|v| Complex64::new(v, 0.0));
        Ok(c * x + dc)
    }

    /// Largest singular value of `G(jω)`.
    pub fn sigma_max(&self, omega: f64) -> Result<f64> {
        let g = self.freq_response(omega)?;
        Ok(largest_singular_value(&g))
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        eig::eigenvalues(&self.a)
    }

    /// Strict open-left-half-plane test on the eigenvalues of `A`.
    pub fn is_stable(&self) -> Result<bool> {
        Ok(self.poles()?.iter().all(|p| p.re < 0.0))
    }

    /// Unstable or marginal poles, empty when Hurwitz.
    pub fn unstable_poles(&self) -> Result<Vec<Complex64>> {
        Ok(self.poles()?.into_iter().filter(|p| p.re >= 0.0).collect())
    }

    /// State coordinate change `x = T z`.
    pub fn similarity(&self, t: &DMatrix<f64>, t_inv: &DMatrix<f64>) -> Self {
        Self {
            a: t_inv * &self.a * t,
            b: t_inv * &self.b,
            c: &self.c * t,
            d: self.d.clone(),
        }
    }

    /// Diagonal power-of-two rescaling of the state to balance `A`.
    pub fn balanced_scaling(&self) -> Self {
        if self.n_states() == 0 {
            return self.clone();
        }
        let (_, d) = eig::balance(&self.a);
        let t = DMatrix::from_diagonal(&d);
        let t_inv = DMatrix::from_diagonal(&d.map(|x| 1.0 / x));
        self.similarity(&t, &t_inv)
    }

    /// Keeps the listed outputs and inputs.
    pub fn select(&self, outputs: &[usize], inputs: &[usize]) -> Self {
        let n = self.n_states();
        let b = DMatrix::from_fn(n, inputs.len(), |i, j| self.b[(i, inputs[j])]);
        let c = DMatrix::from_fn(outputs.len(), n, |i, j| self.c[(outputs[i], j)]);
        let d = DMatrix::from_fn(outputs.len(), inputs.len(), |i, j| self.d[(outputs[i], inputs[j])]);
        Self {
            a: self.a.clone(),
            b,
            c,
            d,
        }
    }

    /// `self − other`, realized in parallel.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.n_inputs() != other.n_inputs() || self.n_outputs() != other.n_outputs() {
            return Err(Error::Domain("difference of systems with different shapes".into()));
        }
        let (n1, n2) = (self.n_states(), other.n_states());
        let mut a = DMatrix::zeros(n1 + n2, n1 + n2);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&other.a);
        let mut b = DMatrix::zeros(n1 + n2, self.n_inputs());
        b.view_mut((0, 0), (n1, self.n_inputs())).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, self.n_inputs())).copy_from(&other.b);
        let mut c = DMatrix::zeros(self.n_outputs(), n1 + n2);
        c.view_mut((0, 0), (self.n_outputs(), n1)).copy_from(&self.c);
        c.view_mut((0, n1), (self.n_outputs(), n2)).copy_from(&(-&other.c));
        Self::new(a, b, c, &self.d - &other.d)
    }
}

/// Characteristic polynomial `det(sI − A)` from the eigenvalues of `A`.
pub fn charpoly(a: &DMatrix<f64>) -> Result<Polynomial> {
    let ev = eig::eigenvalues(a)?;
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in &ev {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, v) in c.iter().enumerate() {
            next[i] += v;
            next[i + 1] -= v * r;
        }
        c = next;
    }
    Ok(Polynomial::new(c.iter().map(|z| z.re).collect::<Vec<_>>()))
}

pub fn largest_singular_value(g: &DMatrix<Complex64>) -> f64 {
    match g.shape() {
        (0, _) | (_, 0) => 0.0,
        (1, _) | (_, 1) => g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        _ => g
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .fold(0.0, |m: f64, v| m.max(*v)),
    }
}

/// Block-diagram interconnection of state-space blocks.
///
/// Every block input is a linear combination of external inputs and block
/// outputs; every external output is a linear combination of block outputs
/// and external inputs. Algebraic loops through `D` terms are resolved.
#[derive(Debug, Clone, Default)]
pub struct BlockDiagram {
    blocks: Vec<StateSpace>,
    n_ext_in: usize,
    links: Vec<(usize, usize, Signal, f64)>,
    outputs: Vec<Vec<(Signal, f64)>>,
}

/// A signal source inside a [`BlockDiagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    External(usize),
    Block(usize, usize),
}

impl BlockDiagram {
    pub fn new(n_external_inputs: usize) -> Self {
        Self {
            n_ext_in: n_external_inputs,
            ..Default::default()
        }
    }

    /// Adds a block and returns its index.
    pub fn add(&mut self, block: StateSpace) -> usize {
        self.blocks.push(block);
        self.blocks.len() - 1
    }

    pub fn add_tf(&mut self, g: &TransferFunction) -> Result<usize> {
        Ok(self.add(StateSpace::from_tf(g)?.balanced_scaling()))
    }

    /// Adds `gain · from` into input `port` of `block`.
    pub fn feed(&mut self, block: usize, port: usize, from: Signal, gain: f64) {
        self.links.push((block, port, from, gain));
    }

    /// Declares a new external output built from weighted signals.
    pub fn output(&mut self, terms: &[(Signal, f64)]) {
        self.outputs.push(terms.to_vec());
    }

    pub fn build(&self) -> Result<StateSpace> {
        let mut x_off = Vec::new();
        let mut u_off = Vec::new();
        let mut y_off = Vec::new();
        let (mut nx, mut nu, mut ny) = (0, 0, 0);
        for blk in &self.blocks {
            x_off.push(nx);
            u_off.push(nu);
            y_off.push(ny);
            nx += blk.n_states();
            nu += blk.n_inputs();
            ny += blk.n_outputs();
        }
        let mut a = DMatrix::zeros(nx, nx);
        let mut b = DMatrix::zeros(nx, nu);
        let mut c = DMatrix::zeros(ny, nx);
        let mut d = DMatrix::zeros(ny, nu);
        for (k, blk) in self.blocks.iter().enumerate() {
            let (n, m, p) = (blk.n_states(), blk.n_inputs(), blk.n_outputs());
            a.view_mut((x_off[k], x_off[k]), (n, n)).copy_from(&blk.a);
            b.view_mut((x_off[k], u_off[k]), (n, m)).copy_from(&blk.b);
            c.view_mut((y_off[k], x_off[k]), (p, n)).copy_from(&blk.c);
            d.view_mut((y_off[k], u_off[k]), (p, m)).copy_from(&blk.d);
        }
        let nw = self.n_ext_in;
        let mut mm = DMatrix::zeros(nu, ny);
        let mut nn = DMatrix::zeros(nu, nw);
        for &(blk, port, from, g) in &self.links {
            if blk >= self.blocks.len() || port >= self.blocks[blk].n_inputs() {
                return Err(Error::Domain(format!("no input port {port} on block {blk}")));
            }
            let row = u_off[blk] + port;
            match from {
                Signal::External(i) => nn[(row, i)] += g,
                Signal::Block(j, q) => mm[(row, y_off[j] + q)] += g,
            }
        }
        let nz = self.outputs.len();
        let mut pp = DMatrix::zeros(nz, ny);
        let mut qq = DMatrix::zeros(nz, nw);
        for (r, terms) in self.outputs.iter().enumerate() {
            for &(sig, g) in terms {
                match sig {
                    Signal::External(i) => qq[(r, i)] += g,
                    Signal::Block(j, q) => pp[(r, y_off[j] + q)] += g,
                }
            }
        }
        let loop_m = DMatrix::<f64>::identity(ny, ny) - &d * &mm;
        let e = loop_m
            .try_inverse()
            .ok_or_else(|| Error::Singular("algebraic loop is not well posed".into()))?;
        let ec = &e * &c;
        let edn = &e * &d * &nn;
        let a_cl = &a + &b * &mm * &ec;
        let b_cl = &b * (&mm * &edn + &nn);
        let c_cl = &pp * &ec;
        let d_cl = &pp * &edn + &qq;
        StateSpace::new(a_cl, b_cl, c_cl, d_cl)
    }
}
