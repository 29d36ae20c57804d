//! Frequency-wise check of the current-sharing error bound for three
//! converters, with exact and mismatched current references.

use dclink::analysis::{sharing_bound_check, SharingSignals};
use dclink::design::{bus_plant, canonical_outer, sensitivity_family, shaped_plant, InnerDesign};
use dclink::lti::FrequencyGrid;
use num_complex::Complex64;

fn main() -> dclink::Result<()> {
    let gc = shaped_plant(&InnerDesign::case_study())?;
    let fam = sensitivity_family(&bus_plant(500e-6)?, &gc, &canonical_outer())?;
    let grid = FrequencyGrid::standard();
    let n = grid.len();
    let gammas = [0.5, 0.2, 0.3];
    for mismatch in [1.0, 1.05] {
        let i_load = vec![Complex64::new(20.0, 0.0); n];
        let signals = SharingSignals {
            v_ref: vec![Complex64::new(240.0, 0.0); n],
            i_refs: gammas.iter().map(|g| vec![Complex64::new(20.0 * g * mismatch, 0.0); n]).collect(),
            i_load,
        };
        for k in 0..3 {
            let rep = sharing_bound_check(&fam, &signals, k, 3, &grid)?;
            let tight = rep
                .rows
                .iter()
                .filter(|r| r.premises_hold)
                .map(|r| r.lhs / r.rhs)
                .fold(0.0, f64::max);
            println!(
                "mismatch {mismatch}: converter {}: {} points, {} without premises, {} violations, max lhs/rhs {tight:.3}",
                k + 1,
                rep.rows.len(),
                rep.premise_failures(),
                rep.violations().count()
            );
        }
    }
    Ok(())
}
