use nalgebra::{DMatrix, DVector};

use super::eig;
use crate::error::{Error, Result};

/// Solves `A·P + P·Aᵀ + Q = 0` for Hurwitz `A` by dense linearization
/// (`(I⊗A + A⊗I) vec(P) = −vec(Q)`). Intended for small orders.
pub fn lyap_solve(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n || q.shape() != (n, n) {
        return Err(Error::Domain("lyap_solve: A and Q must be square and equal size".into()));
    }
    let asym = (q - q.transpose()).amax();
    if asym > 1e-12 * q.amax().max(1.0) {
        return Err(Error::Domain("lyap_solve: Q is not symmetric".into()));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let abscissa = eig::spectral_abscissa(a)?;
    if abscissa >= 0.0 {
        return Err(Error::Domain(format!(
            "lyap_solve: A is not Hurwitz (max Re λ = {abscissa})"
        )));
    }
    let nn = n * n;
    // Column-major vec: vec(AP) = (I⊗A) vec(P), vec(PAᵀ) = (A⊗I) vec(P).
    let mut k = DMatrix::<f64>::zeros(nn, nn);
    for j in 0..n {
        for i in 0..n {
            let row = i + j * n;
            for l in 0..n {
                k[(row, l + j * n)] += a[(i, l)];
                k[(row, i + l * n)] += a[(j, l)];
            }
        }
    }
    let rhs = DVector::from_iterator(nn, q.iter().map(|v| -v));
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("lyap_solve: singular Kronecker system".into()))?;
    let p = DMatrix::from_column_slice(n, n, sol.as_slice());
    Ok((&p + p.transpose()) * 0.5)
}

/// Frobenius norm of `A·P + P·Aᵀ + Q`.
pub fn lyap_residual(a: &DMatrix<f64>, p: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    (a * p + p * a.transpose() + q).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_case() {
        let p = lyap_solve(&DMatrix::from_element(1, 1, -1.0), &DMatrix::from_element(1, 1, 2.0)).unwrap();
        assert!((p[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_closed_form() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -2.0]));
        let p = lyap_solve(&a, &DMatrix::identity(2, 2)).unwrap();
        assert!((p[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((p[(1, 1)] - 0.25).abs() < 1e-15);
        assert!(p[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn non_hurwitz_rejected() {
        let a = DMatrix::from_element(1, 1, 0.5);
        assert!(matches!(
            lyap_solve(&a, &DMatrix::identity(1, 1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_symmetric_q_rejected() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -2.0]));
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(lyap_solve(&a, &q).is_err());
    }
}
