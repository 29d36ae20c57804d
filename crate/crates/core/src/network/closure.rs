//! Frequency-domain closure of the parallel network.
//!
//! With `Σ i_ref,k = i_load` each converter contributes
//! `iL_k = G̃c_k S2_k (Kv_k e1 + Kr γk i_load)`, so
//!
//! ```text
//! V = Gv·(A·e1 + (B − 1)·i_load),   A = Σ G̃c_k S2_k Kv_k,   B = Σ γk T2_k
//! ```
//!
//! which closes to `V_ref → V = Gv·A/(1 + Gv·A)` and
//! `i_load → V = Gv·(B − 1)/(1 + Gv·A)`.

use crate::design::{bus_plant, design_inner, inductor_plant, shaped_plant};
use crate::error::{Error, Result};
use crate::lti::{Polynomial, TransferFunction};

use super::config::{ConverterSpec, NetworkConfig};

/// The two closed maps into the bus voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkMaps {
    pub from_vref: TransferFunction,
    pub from_iload: TransferFunction,
}

/// Closed inner loop of one converter. When the plant matches the design
/// inductance this is the shaped plant itself; otherwise the actual loop
/// `Kc/(sL)` is closed.
pub fn inner_closed_loop(spec: &ConverterSpec) -> Result<TransferFunction> {
    if spec.design_inductance == spec.params.inductance {
        shaped_plant(&spec.inner)
    } else {
        let kc = design_inner(spec.design_inductance, &spec.inner)?;
        kc.series(&inductor_plant(spec.params.inductance)?).feedback()
    }
}

/// Closure with equal sharing ratios `γk = 1/m`.
pub fn transfer_functions_of_network(cfg: &NetworkConfig) -> Result<NetworkMaps> {
    let m = cfg.m();
    transfer_functions_with_gammas(cfg, &vec![1.0 / m as f64; m])
}

pub fn transfer_functions_with_gammas(cfg: &NetworkConfig, gammas: &[f64]) -> Result<NetworkMaps> {
    cfg.validate()?;
    if gammas.len() != cfg.m() {
        return Err(Error::Domain(format!("expected {} sharing ratios, got {}", cfg.m(), gammas.len())));
    }
    let gv = bus_plant(cfg.bus_c)?;
    let kr = &cfg.outer.kr;
    let (nr, dr) = (kr.num(), kr.den());

    // A = Σ nG·nV_k·dR / (dV·Δ_k),  B = Σ γk·nG·nR / Δ_k,  Δ_k = dG·dR + nG·nR.
    // `parallel` merges identical denominators, so a symmetric network
    // keeps the order of the single loop.
    let mut a = TransferFunction::zero();
    let mut b = TransferFunction::zero();
    for (k, spec) in cfg.converters.iter().enumerate() {
        let gc = inner_closed_loop(spec)?;
        let kv = cfg.kv_of(k);
        let (ng, dg) = (gc.num(), gc.den());
        let delta = &(dg * dr) + &(ng * nr);
        let a_k = TransferFunction::new(&(ng * kv.num()) * dr, kv.den() * &delta)?;
        let b_k = TransferFunction::new((ng * nr).scale(gammas[k]), delta)?;
        a = a.parallel(&a_k);
        b = b.parallel(&b_k);
    }
    let (ngv, dgv) = (gv.num(), gv.den());
    let (na, da) = (a.num(), a.den());
    let (nb, db) = (b.num(), b.den());

    let den_v = &(dgv * da) + &(ngv * na);
    let from_vref = TransferFunction::new(ngv * na, den_v.clone())?;

    // When dA = dV·dB the factor dB cancels structurally from the load map.
    let dv = cfg.outer.kv.den();
    let from_iload = if *da == dv * db {
        TransferFunction::new(&(ngv * &(nb - db)) * dv, den_v)?
    } else {
        TransferFunction::new(&(ngv * &(nb - db)) * da, db * &den_v)?
    };
    Ok(NetworkMaps { from_vref, from_iload })
}

/// Closed maps of the single-converter loop `V = Gv(G̃c u − i_load)`,
/// `u = Kv e1 + Kr(i_load − iL)`, from the standalone sensitivity family:
/// `V_ref → V = T1` and `i_load → V = −Gv·S1`.
pub fn single_loop_maps(gv: &TransferFunction, gc: &TransferFunction, kv: &TransferFunction, kr: &TransferFunction) -> Result<NetworkMaps> {
    let fam = crate::design::sensitivity_family(
        gv,
        gc,
        &crate::design::OuterControllers {
            kv: kv.clone(),
            kr: kr.clone(),
        },
    )?;
    let from_iload = TransferFunction::new(
        &Polynomial::constant(-1.0) * &(gv.num() * fam.s1.num()),
        gv.den() * fam.s1.den(),
    )?;
    Ok(NetworkMaps {
        from_vref: fam.t1,
        from_iload,
    })
}
