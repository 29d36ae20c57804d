use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Angular frequency of the 120 Hz rectifier ripple, rad/s.
pub const RIPPLE_OMEGA: f64 = 2.0 * PI * 120.0;

/// Strictly increasing, positive angular frequencies in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::Domain("frequency grid is empty".into()));
        }
        if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Domain("frequency grid entries must be finite and > 0".into()));
        }
        if omegas.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Domain("frequency grid must be strictly increasing".into()));
        }
        Ok(Self { omegas })
    }

    /// `n` logarithmically spaced points over `[lo, hi]`.
    pub fn logspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(Error::Domain(format!("bad logspace({lo}, {hi}, {n})")));
        }
        let (a, b) = (lo.log10(), hi.log10());
        let step = (b - a) / (n - 1) as f64;
        Self::new((0..n).map(|i| 10f64.powf(a + step * i as f64)).collect())
    }

    /// 400 log points over `[1e-1, 1e6]` rad/s with ten times the density in
    /// the octave band around the 120 Hz ripple.
    pub fn standard() -> Self {
        let base = Self::logspace(1e-1, 1e6, 400).expect("static grid");
        base.refined(RIPPLE_OMEGA / 2.0, RIPPLE_OMEGA * 2.0, 10)
    }

    /// Adds `factor`× the local density of log points inside `[lo, hi]`.
    pub fn refined(&self, lo: f64, hi: f64, factor: usize) -> Self {
        let inside = self.omegas.iter().filter(|w| **w >= lo && **w <= hi).count().max(2);
        let extra = Self::logspace(lo, hi, inside * factor).expect("valid band");
        self.merged(&extra.omegas)
    }

    /// Union with extra points; duplicates within 1e-12 relative collapse.
    pub fn merged(&self, extra: &[f64]) -> Self {
        let mut all: Vec<f64> = self.omegas.iter().chain(extra).copied().filter(|w| *w > 0.0).collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        Self { omegas: all }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}
