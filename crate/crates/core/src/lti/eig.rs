//! Dense nonsymmetric eigenvalues with diagonal balancing.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parlett–Reinsch balancing. Returns the scaled matrix `D⁻¹ A D` and the
/// diagonal of `D` (powers of two, so the similarity is exact).
pub fn balance(a: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut d = DVector::from_element(n, 1.0);
    const RADIX: f64 = 2.0;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
    (m, d)
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry in eigenproblem".into()));
    }
    if n == 1 {
        return Ok(vec![Complex64::new(a[(0, 0)], 0.0)]);
    }
    let (b, _) = balance(a);
    // The QR iteration occasionally stalls on structured matrices (Hamiltonians
    // with eigenvalues close to the imaginary axis). A looser deflation
    // threshold, then an orthogonal similarity, usually breaks the cycle.
    for k in 0..4 {
        let m = if k == 0 { b.clone() } else { reflect(&b, k) };
        for eps in [f64::EPSILON, 8.0 * f64::EPSILON, 64.0 * f64::EPSILON] {
            if let Some(schur) = Schur::try_new(m.clone(), eps, 200 * n.max(10)) {
                let ev = schur.complex_eigenvalues();
                return Ok(ev.iter().map(|z| Complex64::new(z.re, z.im)).collect());
            }
        }
    }
    Err(Error::Numerical("Schur iteration did not converge".into()))
}

/// `H A H` for a fixed Householder reflector `H = I - 2vvᵀ/vᵀv`.
fn reflect(a: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let v = DVector::from_fn(n, |i, _| ((i + 1) as f64 * (0.7 + k as f64)).sin() + 0.1);
    let h = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / v.norm_squared());
    &h * a * &h
}

/// Largest real part among the eigenvalues.
pub fn spectral_abscissa(a: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .fold(f64::NEG_INFINITY, |m, z| m.max(z.re)))
}
