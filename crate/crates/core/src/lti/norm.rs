//! H∞ norm by bisection on the level `γ`, testing for imaginary-axis
//! eigenvalues of the associated Hamiltonian matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eig;
use super::freq::FrequencyGrid;
use super::lyap::lyap_solve;
use super::ss::{largest_singular_value, StateSpace};
use crate::error::{Error, Result};

/// Relative distance to the imaginary axis below which a Hamiltonian
/// eigenvalue counts as a crossing candidate.
const IMAG_AXIS_TOL: f64 = 1e-6;

/// Maximum of `σ_max(G(jω))` over the grid: a lower bound on `‖G‖∞`.
pub fn hinf_norm_grid_oracle(sys: &StateSpace, grid: &FrequencyGrid) -> Result<f64> {
    let mut best = largest_singular_value(&sys.eval(Complex64::new(0.0, 0.0))?);
    for &w in grid.omegas() {
        best = best.max(sys.sigma_max(w)?);
    }
    Ok(best)
}

/// Dense oracle grid: log points spanning the pole magnitudes plus a local
/// refinement around every pole's natural and damped frequency.
pub fn oracle_grid(sys: &StateSpace, points: usize) -> Result<FrequencyGrid> {
    let poles = sys.poles()?;
    let mags: Vec<f64> = poles.iter().map(|p| p.norm()).filter(|m| *m > 0.0).collect();
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min).min(1.0) * 1e-3;
    let hi = mags.iter().cloned().fold(0.0, f64::max).max(1.0) * 1e3;
    let mut grid = FrequencyGrid::logspace(lo, hi, points)?;
    for p in &poles {
        for centre in [p.im.abs(), p.norm()] {
            if centre > 0.0 {
                let width = (p.re.abs() * 4.0).max(centre * 1e-3).min(centre * 0.5);
                let local = FrequencyGrid::logspace((centre - width).max(centre * 0.5), centre + width, 201)?;
                grid = grid.merged(local.omegas());
            }
        }
    }
    Ok(grid)
}

/// `‖G‖∞` of a stable system to relative tolerance `tol`.
pub fn hinf_norm(sys: &StateSpace, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain("hinf_norm: tol must be positive".into()));
    }
    let d_norm = largest_singular_value(&sys.d.map(|v| Complex64::new(v, 0.0)));
    if sys.n_states() == 0 {
        return Ok(d_norm);
    }
    let unstable = sys.unstable_poles()?;
    if !unstable.is_empty() {
        return Err(Error::Domain(format!(
            "hinf_norm: system is not stable (pole {})",
            unstable[0]
        )));
    }
    let sys = sys.balanced_scaling();

    let coarse = oracle_grid(&sys, 200)?;
    let mut lo = hinf_norm_grid_oracle(&sys, &coarse)?.max(d_norm);
    if lo == 0.0 {
        return Ok(0.0);
    }
    let mut hi = 2.0 * bounded_real_upper_bound(&sys, d_norm).unwrap_or(lo * 10.0).max(lo);
    // The bracket must satisfy "no crossing at hi".
    let mut grow = 0;
    while let Some(w) = crossing_frequencies(&sys, hi)? {
        let s = max_sigma_at(&sys, &w)?;
        if s < hi * (1.0 - 1e-6) {
            break;
        }
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::Numerical("hinf_norm: bisection failed to bracket the norm".into()));
        }
    }

    let mut iters = 0;
    while hi - lo > tol * lo {
        iters += 1;
        if iters > 200 {
            return Err(Error::Numerical("hinf_norm: bisection did not converge".into()));
        }
        let gamma = 0.5 * (lo + hi);
        match crossing_frequencies(&sys, gamma)? {
            Some(ws) => {
                let s = max_sigma_at(&sys, &ws)?;
                if s >= gamma * (1.0 - 1e-6) {
                    lo = gamma.max(s);
                } else {
                    hi = gamma;
                }
            }
            None => hi = gamma,
        }
        if lo > hi {
            hi = lo;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `σ_max(D) + 2·Σ Hankel singular values`, an upper bound on `‖G‖∞`.
fn bounded_real_upper_bound(sys: &StateSpace, d_norm: f64) -> Option<f64> {
    let hsv = super::reduce::hankel_singular_values(sys).ok()?;
    let s: f64 = hsv.iter().sum();
    s.is_finite().then_some(d_norm + 2.0 * s)
}

/// Evaluates `σ_max` at the candidate frequencies and at midpoints between
/// consecutive ones.
fn max_sigma_at(sys: &StateSpace, ws: &[f64]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for (i, &w) in ws.iter().enumerate() {
        best = best.max(sys.sigma_max(w)?);
        if let Some(&next) = ws.get(i + 1) {
            best = best.max(sys.sigma_max(0.5 * (w + next))?);
        }
    }
    Ok(best)
}

/// Sorted nonnegative frequencies of Hamiltonian eigenvalues lying on the
/// imaginary axis at level `gamma`, or `None` when there are none.
fn crossing_frequencies(sys: &StateSpace, gamma: f64) -> Result<Option<Vec<f64>>> {
    let h = hamiltonian(sys, gamma)?;
    let hnorm = h.amax();
    let ev = eig::eigenvalues(&h)?;
    let mut ws: Vec<f64> = ev
        .iter()
        .filter(|z| z.re.abs() <= IMAG_AXIS_TOL * z.norm().max(1e-12 * hnorm))
        .map(|z| z.im.abs())
        .collect();
    if ws.is_empty() {
        return Ok(None);
    }
    ws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ws.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1e-12));
    Ok(Some(ws))
}

fn hamiltonian(sys: &StateSpace, gamma: f64) -> Result<DMatrix<f64>> {
    let n = sys.n_states();
    let (a, b, c, d) = (&sys.a, &sys.b, &sys.c, &sys.d);
    let m = b.ncols();
    let p = c.nrows();
    let r = DMatrix::<f64>::identity(m, m) * (gamma * gamma) - d.transpose() * d;
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| Error::Numerical("hinf_norm: γ²I − DᵀD singular".into()))?;
    let a_h = a + b * &r_inv * d.transpose() * c;
    let g = b * &r_inv * b.transpose();
    let q = -(c.transpose() * (DMatrix::<f64>::identity(p, p) + d * &r_inv * d.transpose()) * c);
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&a_h);
    h.view_mut((0, n), (n, n)).copy_from(&g);
    h.view_mut((n, 0), (n, n)).copy_from(&q);
    h.view_mut((n, n), (n, n)).copy_from(&(-a_h.transpose()));
    Ok(h)
}

/// Controllability and observability gramians of a stable system.
pub fn gramians(sys: &StateSpace) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let p = lyap_solve(&sys.a, &(&sys.b * sys.b.transpose()))?;
    let q = lyap_solve(&sys.a.transpose(), &(sys.c.transpose() * &sys.c))?;
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::tf::TransferFunction;

    #[test]
    fn first_order_lag_peak_at_dc() {
        let g = TransferFunction::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
        let ss = StateSpace::from_tf(&g).unwrap();
        let n = hinf_norm(&ss, 1e-9).unwrap();
        assert!((n - 1.0).abs() < 1e-8, "{n}");
    }

    #[test]
    fn static_gain_is_largest_singular_value() {
        let d = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -4.0]);
        let n = hinf_norm(&StateSpace::static_gain(d), 1e-6).unwrap();
        assert_eq!(n, 4.0);
    }

    #[test]
    fn unstable_rejected() {
        let g = TransferFunction::from_coeffs(&[1.0], &[1.0, -1.0]).unwrap();
        let ss = StateSpace::from_tf(&g).unwrap();
        assert!(matches!(hinf_norm(&ss, 1e-6), Err(Error::Domain(_))));
    }

    #[test]
    fn biproper_system() {
        // (s + 2)/(s + 1): peak 2 at DC, tends to 1.
        let g = TransferFunction::from_coeffs(&[1.0, 2.0], &[1.0, 1.0]).unwrap();
        let ss = StateSpace::from_tf(&g).unwrap();
        let n = hinf_norm(&ss, 1e-9).unwrap();
        assert!((n - 2.0).abs() < 1e-8, "{n}");
    }
}
