use std::fmt;

use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// SISO rational transfer function `num(s)/den(s)` with a monic denominator.
///
/// Products and sums never cancel common factors on their own; use
/// [`TransferFunction::minreal`] when cancellation is wanted.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Polynomial,
    den: Polynomial,
}

impl TransferFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("transfer function denominator is zero".into()));
        }
        let lead = den.leading();
        Ok(Self {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    /// Builds `gain · Π num_factors / Π den_factors` by expanding the factors.
    pub fn from_factors(gain: f64, num_factors: &[Polynomial], den_factors: &[Polynomial]) -> Result<Self> {
        let num = num_factors
            .iter()
            .fold(Polynomial::constant(gain), |acc, f| &acc * f);
        let den = den_factors.iter().fold(Polynomial::one(), |acc, f| &acc * f);
        Self::new(num, den)
    }

    pub fn gain(k: f64) -> Self {
        Self {
            num: Polynomial::constant(k),
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::gain(0.0)
    }

    /// Pure integrator scaled by `1/c`, e.g. a bus capacitance.
    pub fn integrator(c: f64) -> Result<Self> {
        Self::new(Polynomial::constant(1.0), Polynomial::new(vec![c, 0.0]))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn order(&self) -> usize {
        self.den.degree()
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    /// `a · b` without cancellation.
    pub fn series(&self, other: &Self) -> Self {
        Self {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    /// `a + b`. Identical denominators are shared rather than multiplied.
    pub fn parallel(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Self {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.parallel(&other.neg())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Negative unity feedback closure `L/(1+L)` of this loop gain.
    pub fn feedback(&self) -> Result<Self> {
        let den = &self.den + &self.num;
        if den.is_zero() {
            return Err(Error::Singular("1 + L(s) vanishes identically".into()));
        }
        Self::new(self.num.clone(), den)
    }

    /// Sensitivity `1/(1+L)` of this loop gain.
    pub fn sensitivity(&self) -> Result<Self> {
        let den = &self.den + &self.num;
        if den.is_zero() {
            return Err(Error::Singular("1 + L(s) vanishes identically".into()));
        }
        Self::new(self.den.clone(), den)
    }

    /// `G/(1 + G·K)` for forward path `G` and feedback path `K`, formed as
    /// `nG·dK / (dG·dK + nG·nK)`.
    pub fn feedback_with(&self, back: &Self) -> Result<Self> {
        let den = &(&self.den * &back.den) + &(&self.num * &back.num);
        if den.is_zero() {
            return Err(Error::Singular("1 + G(s)K(s) vanishes identically".into()));
        }
        Self::new(&self.num * &back.den, den)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Frequency response at `jω`.
    pub fn freq_response(&self, omega: f64) -> Result<Complex64> {
        let s = Complex64::new(0.0, omega);
        let d = self.den.eval(s);
        let scale = self
            .den
            .coeffs()
            .iter()
            .rev()
            .enumerate()
            .map(|(k, c)| c.abs() * omega.abs().powi(k as i32))
            .sum::<f64>();
        if d.norm() <= 1e-14 * scale {
            return Err(Error::Singular(format!("pole on the imaginary axis at ω = {omega}")));
        }
        Ok(self.num.eval(s) / d)
    }

    /// Value at `s = 0`.
    pub fn dc_gain(&self) -> Result<f64> {
        let d = self.den.constant_term();
        if d == 0.0 {
            return Err(Error::Singular("pole at the origin".into()));
        }
        Ok(self.num.constant_term() / d)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        self.den.roots()
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        self.num.roots()
    }

    /// All poles strictly in the open left half-plane.
    pub fn is_stable(&self) -> Result<bool> {
        Ok(self.poles()?.iter().all(|p| p.re < 0.0))
    }

    /// Coefficient distance after normalization (both denominators monic).
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        self.num
            .max_relative_diff(&other.num)
            .max(self.den.max_relative_diff(&other.den))
    }

    /// Cancels pole/zero pairs whose roots agree to relative tolerance `tol`.
    pub fn minreal(&self, tol: f64) -> Result<Self> {
        if self.num.is_zero() {
            return Ok(Self::zero());
        }
        let mut zeros = self.zeros()?;
        let mut poles = self.poles()?;
        let mut i = 0;
        while i < zeros.len() {
            let z = zeros[i];
            let hit = poles
                .iter()
                .position(|p| (z - p).norm() <= tol * p.norm().max(z.norm()).max(1e-12));
            match hit {
                Some(j) => {
                    zeros.swap_remove(i);
                    poles.swap_remove(j);
                }
                None => i += 1,
            }
        }
        let num = poly_from_complex_roots(&zeros).scale(self.num.leading());
        let den = poly_from_complex_roots(&poles);
        Self::new(num, den)
    }
}

/// Real polynomial with the given (conjugate-closed) root set.
fn poly_from_complex_roots(roots: &[Complex64]) -> Polynomial {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a * r;
        }
        c = next;
    }
    Polynomial::new(c.iter().map(|z| z.re).collect::<Vec<_>>())
}

impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(n: &[f64], d: &[f64]) -> TransferFunction {
        TransferFunction::from_coeffs(n, d).unwrap()
    }

    #[test]
    fn series_does_not_cancel() {
        let a = tf(&[1.0], &[1.0, 0.0]);
        let b = tf(&[1.0, 0.0], &[1.0]);
        let p = a.series(&b);
        assert_eq!(p.num().coeffs(), &[1.0, 0.0]);
        assert_eq!(p.den().coeffs(), &[1.0, 0.0]);
    }

    #[test]
    fn integrator_under_unity_feedback() {
        let l = tf(&[1.0], &[1.0, 0.0]);
        let t = l.feedback().unwrap();
        assert_eq!(t, tf(&[1.0], &[1.0, 1.0]));
        let s = l.sensitivity().unwrap();
        assert_eq!(s, tf(&[1.0, 0.0], &[1.0, 1.0]));
    }

    #[test]
    fn zero_loop_closes_to_zero() {
        let t = TransferFunction::zero().feedback().unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn degenerate_loop_is_singular() {
        assert!(matches!(TransferFunction::gain(-1.0).feedback(), Err(Error::Singular(_))));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(TransferFunction::from_coeffs(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn first_order_lag_magnitude() {
        let g = tf(&[1.0], &[1.0, 1.0]);
        let h = g.freq_response(1.0).unwrap();
        assert!((h.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn pole_on_axis_is_singular() {
        let g = tf(&[1.0], &[1.0, 0.0, 4.0]);
        assert!(g.freq_response(2.0).is_err());
        assert!(g.freq_response(1.0).is_ok());
    }

    #[test]
    fn stability_by_poles() {
        assert!(tf(&[1.0], &[1.0, 1.0]).is_stable().unwrap());
        assert!(!tf(&[1.0], &[1.0, -1.0]).is_stable().unwrap());
    }

    #[test]
    fn minreal_cancels_only_matching_pairs() {
        let a = tf(&[1.0, 2.0], &[1.0, 3.0, 2.0]);
        let r = a.minreal(1e-7).unwrap();
        assert_eq!(r.order(), 1);
        assert!((r.dc_gain().unwrap() - 1.0).abs() < 1e-12);
        let b = tf(&[1.0, 2.1], &[1.0, 3.0, 2.0]);
        assert_eq!(b.minreal(1e-7).unwrap().order(), 2);
    }

    #[test]
    fn parallel_shares_identical_denominators() {
        let a = tf(&[1.0], &[1.0, 2.0]);
        let sum = a.parallel(&a.scale(2.0));
        assert_eq!(sum.den().degree(), 1);
        assert_eq!(sum.num().coeffs(), &[3.0]);
    }

    #[test]
    fn feedback_with_matches_unity_closure() {
        let g = tf(&[2.0], &[1.0, 1.0, 0.0]);
        let k = tf(&[1.0, 3.0], &[1.0, 5.0]);
        let direct = g.feedback_with(&k).unwrap();
        let w = 2.3;
        let expect = g.freq_response(w).unwrap()
            / (1.0 + g.freq_response(w).unwrap() * k.freq_response(w).unwrap());
        assert!((direct.freq_response(w).unwrap() - expect).norm() < 1e-14);
    }
}
