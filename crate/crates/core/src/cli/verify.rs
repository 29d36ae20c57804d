//! Aggregated invariant checks behind `dclink verify`.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{equivalence_residual, sharing_bound_check, SharingSignals};
use crate::converter::ConverterParams;
use crate::design::{
    bus_plant, canonical_outer, canonical_weights, design_inner, generalized_plant, inductor_plant, sensitivity_family,
    shaped_plant, weighted_closed_loop, InnerDesign, INNER_IDENTITY_TOL,
};
use crate::error::Result;
use crate::lti::{
    balanced_truncation, hinf_norm, hinf_norm_grid_oracle, lyap_residual, lyap_solve, oracle_grid, FrequencyGrid, StateSpace,
};
use crate::network::{transfer_functions_of_network, ConverterSpec, Mode, NetworkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

pub const EQUIVALENCE_TOL: f64 = 1e-8;
pub const NORM_REL_TOL: f64 = 1e-3;
pub const LYAP_TOL: f64 = 1e-10;

/// Relative perturbation applied to `Kv_1` by the fault-injection switch.
pub const INJECTED_KV_SCALE: f64 = 1.01;

fn random_inner(rng: &mut ChaCha8Rng) -> (f64, InnerDesign) {
    let l = rng.random_range(0.5e-3..5e-3);
    let zeta2 = rng.random_range(0.3..4.0);
    let zeta1 = zeta2 * rng.random_range(0.05..0.95);
    let omega0 = crate::lti::RIPPLE_OMEGA;
    let omega_tilde = omega0 * rng.random_range(1.1..20.0);
    (
        l,
        InnerDesign {
            omega0,
            zeta1,
            zeta2,
            omega_tilde,
        },
    )
}

/// Random stable system with `n` states, `p` outputs and `q` inputs.
pub fn random_stable(rng: &mut ChaCha8Rng, n: usize, p: usize, q: usize) -> StateSpace {
    let mut a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let shift = crate::lti::eig::spectral_abscissa(&a).unwrap_or(0.0);
    let margin = rng.random_range(0.1..1.0);
    for i in 0..n {
        a[(i, i)] -= shift + margin;
    }
    StateSpace::new(
        a,
        DMatrix::from_fn(n, q, |_, _| rng.random_range(-1.0..1.0)),
        DMatrix::from_fn(p, n, |_, _| rng.random_range(-1.0..1.0)),
        DMatrix::from_fn(p, q, |_, _| rng.random_range(-0.5..0.5)),
    )
    .expect("consistent dimensions")
}

fn symmetric_network(m: usize, kv1_scale: f64) -> Result<NetworkConfig> {
    let ls = [1.2e-3, 1.6e-3, 1.9e-3, 1.4e-3, 1.0e-3];
    let converters = (0..m)
        .map(|k| {
            let mut spec = ConverterSpec::nominal(ConverterParams::buck(ls[k % ls.len()], 480.0)?, InnerDesign::case_study());
            if k == 0 {
                spec.kv_scale = kv1_scale;
            }
            Ok(spec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NetworkConfig {
        converters,
        bus_c: 500e-6,
        outer: canonical_outer(),
        mode: Mode::Centralized,
    })
}

fn timed(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_checks(level: Level, inject_fault: bool) -> Vec<CheckResult> {
    let seed = 0x5eed;
    let (n_designs, n_systems) = match level {
        Level::Quick => (10, 5),
        Level::Full => (60, 20),
    };
    let mut out = Vec::new();

    out.push(timed("inner-loop identity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut cases = vec![(1.2e-3, InnerDesign::case_study())];
        cases.extend((0..n_designs).map(|_| random_inner(&mut rng)));
        for (l, d) in &cases {
            let kc = design_inner(*l, d)?;
            let closed = kc.series(&inductor_plant(*l)?).feedback()?;
            worst = worst.max(closed.coeff_distance(&shaped_plant(d)?));
        }
        Ok((worst <= INNER_IDENTITY_TOL, format!("{} designs, max coefficient distance {worst:.2e}", cases.len())))
    }));

    out.push(timed("equivalence residual", || {
        let single = transfer_functions_of_network(&symmetric_network(1, 1.0)?)?;
        let grid = FrequencyGrid::standard();
        let mut worst = 0.0f64;
        for m in [2, 3, 5] {
            let scale = if inject_fault { INJECTED_KV_SCALE } else { 1.0 };
            let multi = transfer_functions_of_network(&symmetric_network(m, scale)?)?;
            worst = worst.max(equivalence_residual(&single, &multi, &grid)?);
        }
        Ok((worst < EQUIVALENCE_TOL, format!("m in {{2,3,5}}, max relative deviation {worst:.2e}")))
    }));

    out.push(timed("sharing bound", || {
        let gc = shaped_plant(&InnerDesign::case_study())?;
        let fam = sensitivity_family(&bus_plant(500e-6)?, &gc, &canonical_outer())?;
        let grid = FrequencyGrid::standard();
        let n = grid.len();
        let gammas = [0.5, 0.2, 0.3];
        let mut checked = 0;
        let mut failures = 0;
        for mismatch in [1.0, 1.1] {
            let il = vec![Complex64::new(20.0, 0.0); n];
            let signals = SharingSignals {
                v_ref: vec![Complex64::new(240.0, 0.0); n],
                i_refs: gammas.iter().map(|g| vec![il[0] * g * mismatch; n]).collect(),
                i_load: il,
            };
            for k in 0..3 {
                let rep = sharing_bound_check(&fam, &signals, k, 3, &grid)?;
                checked += rep.rows.len() - rep.premise_failures();
                failures += rep.violations().count();
            }
        }
        Ok((failures == 0, format!("{checked} frequency points with premises, {failures} violations")))
    }));

    out.push(timed("H-infinity norm vs grid oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1);
        let mut worst = 0.0f64;
        for _ in 0..n_systems {
            let n = rng.random_range(1..=8);
            let (p, q) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let sys = random_stable(&mut rng, n, p, q);
            let g = hinf_norm(&sys, 1e-9)?;
            let o = hinf_norm_grid_oracle(&sys, &oracle_grid(&sys, 2000)?)?;
            worst = worst.max((g - o).abs() / o);
        }
        let gc = shaped_plant(&InnerDesign::case_study())?;
        let gp = generalized_plant(&bus_plant(500e-6)?, &gc, &canonical_weights());
        let cl = weighted_closed_loop(&gp, &canonical_outer())?;
        let g = hinf_norm(&cl, 1e-9)?;
        let o = hinf_norm_grid_oracle(&cl, &oracle_grid(&cl, 2000)?)?;
        worst = worst.max((g - o).abs() / o);
        Ok((worst < NORM_REL_TOL, format!("{} systems, max relative gap {worst:.2e}", n_systems + 1)))
    }));

    out.push(timed("Lyapunov residuals", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 2);
        let mut worst = 0.0f64;
        for _ in 0..n_systems {
            let n = rng.random_range(1..=8);
            let sys = random_stable(&mut rng, n, 1, 1);
            let q = &sys.b * sys.b.transpose();
            let x = lyap_solve(&sys.a, &q)?;
            worst = worst.max(lyap_residual(&sys.a, &x, &q));
        }
        Ok((worst < LYAP_TOL, format!("max residual ‖AP + PAᵀ + Q‖_F {worst:.2e}")))
    }));

    out.push(timed("balanced truncation bound", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 3);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..n_systems {
            let n = rng.random_range(2..=8);
            let sys = random_stable(&mut rng, n, 1, 1);
            let order = rng.random_range(1..n);
            let red = balanced_truncation(&sys, order)?;
            let err = hinf_norm(&sys.difference(&red.reduced)?, 1e-9)?;
            worst = worst.max(err - red.error_bound());
        }
        Ok((worst <= 1e-8, format!("max (error − bound) {worst:.2e}")))
    }));

    out.push(timed("canonical closed loop", || {
        let gc = shaped_plant(&InnerDesign::case_study())?;
        let gp = generalized_plant(&bus_plant(500e-6)?, &gc, &canonical_weights());
        let cl = weighted_closed_loop(&gp, &canonical_outer())?;
        let g = hinf_norm(&cl, 1e-9)?;
        Ok((g.is_finite(), format!("stable, {} states, norm {g:.9}", cl.n_states())))
    }));

    out
}

pub fn render_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "{:<width$}  {}  {:>8.3}s  {}\n",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.elapsed.as_secs_f64(),
            r.detail,
        ));
    }
    s
}
