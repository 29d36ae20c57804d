#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dclink::lti::StateSpace;

pub fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub const SHIPPED: [&str; 3] = ["robustness.cfg", "sharing3.cfg", "droop.cfg"];

/// Writes straight to the process stdout so the line shows up even when the
/// test harness captures output.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

/// Random stable state-space model: a dense random `A` shifted left past its
/// rightmost eigenvalue.
pub fn random_stable(rng: &mut ChaCha8Rng, n: usize, p: usize, q: usize) -> StateSpace {
    let mut a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let abscissa = a
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = abscissa + rng.random_range(0.05..1.0);
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    StateSpace::new(
        a,
        DMatrix::from_fn(n, q, |_, _| rng.random_range(-1.0..1.0)),
        DMatrix::from_fn(p, n, |_, _| rng.random_range(-1.0..1.0)),
        DMatrix::from_fn(p, q, |_, _| rng.random_range(-0.5..0.5)),
    )
    .unwrap()
}

/// `σ_max(C (jωI − A)⁻¹ B + D)` by a complex LU solve.
pub fn sigma_at(sys: &StateSpace, w: f64) -> f64 {
    let n = sys.a.nrows();
    let ac = sys.a.map(|v| Complex64::new(-v, 0.0)) + DMatrix::from_diagonal(&DVector::from_element(n, Complex64::new(0.0, w)));
    let x = ac.lu().solve(&sys.b.map(|v| Complex64::new(v, 0.0))).expect("jω is not an eigenvalue");
    let g = sys.c.map(|v| Complex64::new(v, 0.0)) * x + sys.d.map(|v| Complex64::new(v, 0.0));
    g.singular_values().max()
}

/// Brute-force peak gain: dense log sweep over a range set by the eigenvalue
/// magnitudes, then golden-section refinement around the best local maxima.
pub fn peak_gain_oracle(sys: &StateSpace) -> f64 {
    if sys.a.nrows() == 0 {
        return sys.d.singular_values().max();
    }
    let mags: Vec<f64> = sys.a.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    let lo = (mags.iter().copied().fold(f64::INFINITY, f64::min).min(1.0) * 1e-4).log10();
    let hi = (mags.iter().copied().fold(0.0, f64::max).max(1.0) * 1e4).log10();
    let n = 20000;
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| sigma_at(sys, 10f64.powf(x))).collect();
    let mut best = ys.iter().copied().fold(sigma_at(sys, 0.0), f64::max);
    let mut peaks: Vec<usize> = (1..n - 1).filter(|&i| ys[i] >= ys[i - 1] && ys[i] >= ys[i + 1]).collect();
    peaks.sort_by(|&i, &j| ys[j].partial_cmp(&ys[i]).unwrap());
    for &i in peaks.iter().take(8) {
        let (mut a, mut b) = (xs[i - 1], xs[i + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if sigma_at(sys, 10f64.powf(c)) > sigma_at(sys, 10f64.powf(d)) {
                b = d;
            } else {
                a = c;
            }
        }
        best = best.max(sigma_at(sys, 10f64.powf(0.5 * (a + b))));
    }
    best
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}
