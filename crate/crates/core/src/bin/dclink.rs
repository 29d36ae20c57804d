use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dclink::cli::{self, freq, run, sweep, verify};
use dclink::scenario::Overrides;

#[derive(Parser)]
#[command(name = "dclink", version, about = "Parallel DC-DC converter control: simulate, sweep, verify")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Output directory (default: $DCLINK_OUT/<scenario>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root for default output directories.
    #[arg(long, env = cli::OUT_ENV, default_value = "out")]
    out_root: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Controller sample period, s.
    #[arg(long)]
    ts: Option<f64>,
    /// Simulated horizon, s.
    #[arg(long)]
    duration: Option<f64>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            ts: self.ts,
            duration: self.duration,
        }
    }

    fn out_dir(&self, scenario: &Path, suffix: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let stem = scenario.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned());
            self.out_root.join(format!("{stem}{suffix}"))
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a scenario and write timeseries.csv, summary.txt and meta.txt.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        #[arg(value_enum, default_value = "quick")]
        level: Level,
        /// Perturb Kv_1 by 1% before the equivalence check.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Re-run a scenario for each value of one parameter.
    Sweep {
        scenario: PathBuf,
        /// Dotted key, e.g. `network.bus_c` or `network.converters.0.inductance`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[command(flatten)]
        common: Common,
    },
    /// Write Bode data of controllers and closed-loop maps, plus a plot script.
    Freq {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match args.cmd {
        Cmd::Run { scenario, common } => {
            let out = common.out_dir(&scenario, "");
            run::run_file(&scenario, &out, &common.overrides()).map(|o| {
                for (i, seg) in o.summary.segments.iter().enumerate() {
                    let il: Vec<String> = (1..=o.sim.m()).map(|k| format!("{:.3}", seg.mean(&format!("iL_{k}")))).collect();
                    println!(
                        "segment {}: Vdc = {:.3} V, iL = [{}] A",
                        i + 1,
                        seg.mean("Vdc"),
                        il.join(", ")
                    );
                }
                println!("wrote {}", out.display());
                cli::EXIT_OK
            })
        }
        Cmd::Verify { level, inject_fault } => {
            let level = match level {
                Level::Quick => verify::Level::Quick,
                Level::Full => verify::Level::Full,
            };
            let results = verify::run_checks(level, inject_fault);
            print!("{}", verify::render_table(&results));
            Ok(if results.iter().all(|r| r.passed) {
                cli::EXIT_OK
            } else {
                cli::EXIT_VERIFY_FAILED
            })
        }
        Cmd::Sweep {
            scenario,
            param,
            values,
            common,
        } => {
            let out = common.out_dir(&scenario, "-sweep");
            sweep::parse_values(&values)
                .and_then(|v| sweep::sweep_file(&scenario, &param, &v, &out, &common.overrides()))
                .map(|rows| {
                    println!("{} runs, wrote {}", rows.len(), out.join("sweep.csv").display());
                    cli::EXIT_OK
                })
        }
        Cmd::Freq { scenario, common } => {
            let out = common.out_dir(&scenario, "-freq");
            freq::freq_file(&scenario, &out, &common.overrides()).map(|f| {
                println!(
                    "alpha = {:.6}, signed = {:.6}, flatness = {:.6}; wrote {}",
                    f.ratio.alpha,
                    f.ratio.alpha_signed,
                    f.ratio.flatness,
                    out.display()
                );
                cli::EXIT_OK
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("dclink: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
