use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eig;
use crate::error::Result;

/// Real polynomial in `s` stored with descending powers.
///
/// The zero polynomial is the empty coefficient vector; every other value
/// keeps a nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial, stripping exact leading zeros.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        let first = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
        coeffs.drain(..first);
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Self::new(vec![1.0, 0.0])
    }

    /// Monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| &acc * &Self::new(vec![1.0, -r]))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    /// Constant term (value at `s = 0`).
    pub fn constant_term(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        Self::new(
            self.coeffs
                .iter()
                .take(n)
                .enumerate()
                .map(|(i, &c)| c * (n - i) as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Roots from the eigenvalues of the balanced companion matrix.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return Ok(Vec::new());
        }
        // Exact zero roots are split off so the companion stays nonsingular.
        let trailing = self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
        let reduced = &self.coeffs[..self.coeffs.len() - trailing];
        let m = reduced.len() - 1;
        let mut roots = vec![Complex64::new(0.0, 0.0); trailing];
        if m == 0 {
            return Ok(roots);
        }
        let lead = reduced[0];
        let mut comp = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            comp[(0, j)] = -reduced[j + 1] / lead;
        }
        for i in 1..m {
            comp[(i, i - 1)] = 1.0;
        }
        roots.extend(eig::eigenvalues(&comp)?);
        Ok(roots)
    }

    /// Coefficient-wise comparison scaled by the larger polynomial's size.
    pub fn max_relative_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        let a = pad_front(&self.coeffs, n);
        let b = pad_front(&other.coeffs, n);
        a.iter()
            .zip(&b)
            .map(|(x, y)| {
                let local = x.abs().max(y.abs()).max(1e-14 * scale);
                (x - y).abs() / local
            })
            .fold(0.0, f64::max)
    }
}

fn pad_front(c: &[f64], n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n - c.len()];
    v.extend_from_slice(c);
    v
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let a = pad_front(&self.coeffs, n);
        let b = pad_front(&rhs.coeffs, n);
        Polynomial::new(a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let p = n - i;
            if !first {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match p {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}s")?,
                _ => write!(f, "{a}s^{p}")?,
            }
        }
        Ok(())
    }
}
