//! Balanced truncation (square-root method).

use nalgebra::DMatrix;

use super::norm::gramians;
use super::ss::StateSpace;
use crate::error::{Error, Result};

/// Reduced model together with the Hankel singular values of the original.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: StateSpace,
    pub hankel_values: Vec<f64>,
}

impl Reduction {
    /// Sum of the discarded Hankel singular values.
    pub fn discarded_sum(&self) -> f64 {
        self.hankel_values[self.reduced.n_states()..].iter().sum()
    }

    /// Twice the discarded sum: the a-priori bound on `‖G − G_r‖∞`.
    pub fn error_bound(&self) -> f64 {
        2.0 * self.discarded_sum()
    }
}

/// Square-root factor `L` with `L·Lᵀ = X` for a symmetric positive
/// semidefinite `X`. Rounding-level negative eigenvalues are clamped to zero,
/// so gramians of non-minimal realizations are accepted.
fn psd_factor(x: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (x + x.transpose()) * 0.5;
    let e = sym.symmetric_eigen();
    let mut f = e.eigenvectors;
    for (j, &l) in e.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        f.column_mut(j).scale_mut(s);
    }
    f
}

struct Balancing {
    sys: StateSpace,
    lc: DMatrix<f64>,
    lo: DMatrix<f64>,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
    /// Singular values and their column index, largest first.
    sigma: Vec<(f64, usize)>,
}

fn balancing(sys: &StateSpace) -> Result<Balancing> {
    if !sys.unstable_poles()?.is_empty() {
        return Err(Error::Domain("balanced truncation: system is not stable".into()));
    }
    let sys = sys.balanced_scaling();
    let (p, q) = gramians(&sys)?;
    let lc = psd_factor(&p);
    let lo = psd_factor(&q);
    let svd = (lo.transpose() * &lc).svd(true, true);
    let u = svd.u.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let v = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?.transpose();
    // nalgebra does not promise sorted singular values.
    let mut sigma: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..).collect();
    sigma.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    Ok(Balancing { sys, lc, lo, u, v, sigma })
}

/// Hankel singular values in decreasing order.
pub fn hankel_singular_values(sys: &StateSpace) -> Result<Vec<f64>> {
    Ok(balancing(sys)?.sigma.iter().map(|s| s.0).collect())
}

/// Balances the realization through its gramians and keeps the `order`
/// states with the largest Hankel singular values. The kept values must be
/// clearly nonzero; states beyond the minimal order can only be discarded.
pub fn balanced_truncation(sys: &StateSpace, order: usize) -> Result<Reduction> {
    let n = sys.n_states();
    if order == 0 || order > n {
        return Err(Error::Domain(format!(
            "balanced_truncation: order must be in 1..={n}, got {order}"
        )));
    }
    let Balancing { sys, lc, lo, u, v, sigma } = balancing(sys)?;
    let floor = sigma[0].0 * n as f64 * f64::EPSILON * 1e3;
    if sigma[order - 1].0 <= floor {
        return Err(Error::Numerical(format!(
            "Hankel singular value {} is numerically zero; the realization has fewer than {order} minimal states",
            order
        )));
    }

    let mut t = DMatrix::zeros(n, order);
    let mut t_inv = DMatrix::zeros(order, n);
    for (k, &(s, i)) in sigma.iter().take(order).enumerate() {
        let s = s.sqrt();
        t.set_column(k, &(&lc * v.column(i) / s));
        t_inv.set_row(k, &((&lo * u.column(i)).transpose() / s));
    }
    let reduced = StateSpace::new(
        &t_inv * &sys.a * &t,
        &t_inv * &sys.b,
        &sys.c * &t,
        sys.d.clone(),
    )?;
    Ok(Reduction {
        reduced,
        hankel_values: sigma.iter().map(|s| s.0).collect(),
    })
}
