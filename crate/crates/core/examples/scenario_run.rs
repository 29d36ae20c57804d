//! Runs a scenario file through the same path as `dclink run` and prints the
//! summary it writes.

use std::path::{Path, PathBuf};

use dclink::cli::run::run_file;
use dclink::scenario::Overrides;

fn main() -> dclink::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/sharing3.cfg")
    });
    let out = std::env::temp_dir().join("dclink-scenario-run");
    run_file(&path, &out, &Overrides::default())?;
    print!("{}", std::fs::read_to_string(out.join("summary.txt"))?);
    Ok(())
}
