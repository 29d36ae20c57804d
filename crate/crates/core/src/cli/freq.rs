use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::design::{bus_plant, controller_ratio, controller_ratio_analysis, sensitivity_family, RatioAnalysis};
use crate::error::Result;
use crate::lti::{FrequencyGrid, TransferFunction};
use crate::network::inner_closed_loop;
use crate::scenario::{Overrides, ScenarioFile};

pub const BODE_CHANNELS: [&str; 7] = ["Kv", "Kr", "Gc", "S1", "T1", "S2", "H"];

/// Magnitude in dB and unwrapped phase in degrees over the grid.
pub fn bode(g: &TransferFunction, grid: &FrequencyGrid) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut prev: Option<f64> = None;
    for &w in grid.omegas() {
        let z = g.freq_response(w)?;
        let mut ph = z.arg().to_degrees();
        if let Some(p) = prev {
            ph -= 360.0 * ((ph - p) / 360.0).round();
        }
        prev = Some(ph);
        out.push((20.0 * z.norm().log10(), ph));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct FreqOutcome {
    pub grid: FrequencyGrid,
    pub ratio: RatioAnalysis,
}

pub fn freq_file(path: &Path, out_dir: &Path, overrides: &Overrides) -> Result<FreqOutcome> {
    let mut file = ScenarioFile::load(path)?;
    file.apply(overrides);
    let sc = file.resolve()?;
    let gv = bus_plant(sc.network.bus_c)?;
    let gc = inner_closed_loop(&sc.network.converters[0])?;
    let k = &sc.network.outer;
    let fam = sensitivity_family(&gv, &gc, k)?;
    let grid = FrequencyGrid::standard();
    let channels = [&k.kv, &k.kr, &gc, &fam.s1, &fam.t1, &fam.s2, &fam.h];
    let curves = channels
        .iter()
        .map(|g| bode(g, &grid))
        .collect::<Result<Vec<_>>>()?;

    let mut csv = String::from("omega");
    for name in BODE_CHANNELS {
        let _ = write!(csv, ",{name}_mag_db,{name}_phase_deg");
    }
    csv.push('\n');
    for (j, &w) in grid.omegas().iter().enumerate() {
        let _ = write!(csv, "{w:.16e}");
        for c in &curves {
            let _ = write!(csv, ",{:.16e},{:.16e}", c[j].0, c[j].1);
        }
        csv.push('\n');
    }

    let ratio = controller_ratio_analysis(k, &grid)?;
    let mut rcsv = String::from("omega,abs_ratio,re_ratio,im_ratio,alpha,alpha_signed,flatness\n");
    for &w in grid.omegas() {
        let r = controller_ratio(k, w)?;
        let _ = writeln!(
            rcsv,
            "{w:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.norm(),
            r.re,
            r.im,
            ratio.alpha,
            ratio.alpha_signed,
            ratio.flatness
        );
    }

    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("bode.csv"), csv)?;
    fs::write(out_dir.join("ratio.csv"), rcsv)?;
    fs::write(out_dir.join("plot_bode.py"), PLOT_SCRIPT)?;
    Ok(FreqOutcome { grid, ratio })
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
# Renders bode.csv and ratio.csv from this directory.
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(here, name)) as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


bode = load("bode.csv")
ratio = load("ratio.csv")
channels = ["Kv", "Kr", "Gc", "S1", "T1", "S2", "H"]

fig, (mag, ph) = plt.subplots(2, 1, sharex=True, figsize=(8, 7))
for c in channels:
    mag.semilogx(bode["omega"], bode[c + "_mag_db"], label=c)
    ph.semilogx(bode["omega"], bode[c + "_phase_deg"], label=c)
mag.set_ylabel("magnitude [dB]")
ph.set_ylabel("phase [deg]")
ph.set_xlabel("omega [rad/s]")
mag.legend(ncol=4, fontsize="small")
mag.grid(True, which="both", alpha=0.3)
ph.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(os.path.join(here, "bode.png"), dpi=150)

fig, ax = plt.subplots(figsize=(8, 4))
ax.semilogx(ratio["omega"], ratio["abs_ratio"], label="|Kr/Kv|")
ax.axhline(ratio["alpha"][0], linestyle="--", color="k", label="median")
ax.set_xlabel("omega [rad/s]")
ax.legend()
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(os.path.join(here, "ratio.png"), dpi=150)
if "-q" not in sys.argv:
    print("wrote bode.png and ratio.png")
"#;
