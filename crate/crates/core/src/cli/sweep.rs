use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use toml::Value;

use crate::error::{Error, Result};
use crate::scenario::{Overrides, ScenarioFile};

use super::run::{run_resolved, RunSummary};

/// Sets the value at a dotted path such as `network.bus_c` or
/// `network.converters.0.inductance`. Array elements are addressed by index.
pub fn set_dotted(doc: &mut Value, key: &str, value: Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::config(key, "malformed parameter key"));
    }
    let mut cur = doc;
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        cur = match cur {
            Value::Table(t) => {
                if last {
                    if !t.contains_key(*part) && !is_optional_leaf(part) {
                        return Err(Error::config(key, format!("no field `{part}`")));
                    }
                    t.insert(part.to_string(), value);
                    return Ok(());
                }
                t.entry(part.to_string())
                    .or_insert_with(|| Value::Table(Default::default()))
            }
            Value::Array(a) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| Error::config(key, format!("`{part}` is not an array index")))?;
                let len = a.len();
                let slot = a
                    .get_mut(idx)
                    .ok_or_else(|| Error::config(key, format!("index {idx} out of range (len {len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(Error::config(key, format!("`{part}` is not a table or array"))),
        };
    }
    Ok(())
}

/// Leaves that have serde defaults and may be absent from the file.
fn is_optional_leaf(name: &str) -> bool {
    matches!(
        name,
        "design_inductance" | "kv_scale" | "omega0" | "duration" | "ts" | "substeps" | "seed" | "uncertainty" | "init"
            | "ripple_amplitude" | "ripple_hz" | "inner"
    )
}

/// Parses `"a,b,c"` into TOML values; numbers stay numbers.
pub fn parse_values(list: &str) -> Result<Vec<Value>> {
    let items: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::config("values", "the value list is empty"));
    }
    Ok(items
        .iter()
        .map(|s| {
            if let Ok(i) = s.parse::<i64>() {
                Value::Integer(i)
            } else if let Ok(f) = s.parse::<f64>() {
                Value::Float(f)
            } else {
                Value::String(s.to_string())
            }
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: String,
    pub dir: PathBuf,
    pub summary: RunSummary,
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Runs the scenario once per value, concurrently, each into its own
/// sub-directory, and writes `sweep.csv`.
pub fn sweep_file(path: &Path, key: &str, values: &[Value], out_dir: &Path, overrides: &Overrides) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::config("values", "the value list is empty"));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    let base: Value = toml::from_str(&text).map_err(|e| Error::config(path.display().to_string(), e.message().to_string()))?;
    let name = path
        .file_stem()
        .map_or_else(|| "scenario".to_string(), |s| s.to_string_lossy().into_owned());

    let mut jobs = Vec::with_capacity(values.len());
    for v in values {
        let mut doc = base.clone();
        // Integers are accepted where floats are expected.
        let v = match v {
            Value::Integer(i) if !matches!(key.rsplit('.').next(), Some("substeps" | "seed")) => Value::Float(*i as f64),
            other => other.clone(),
        };
        set_dotted(&mut doc, key, v.clone())?;
        let mut file: ScenarioFile = ScenarioFile::parse(&toml::to_string(&doc).expect("toml value serializes"))?;
        file.apply(overrides);
        let label = fmt_value(&v);
        jobs.push((label.clone(), out_dir.join(format!("{key}={label}")), file));
    }

    let results: Vec<Result<SweepRow>> = thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(label, dir, file)| {
                let name = &name;
                scope.spawn(move || {
                    let outcome = run_resolved(name, file, dir)?;
                    Ok(SweepRow {
                        value: label.clone(),
                        dir: dir.clone(),
                        summary: outcome.summary,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut csv = String::from(
        "value,vdc_mean,ss_error_pct,overshoot_pct,settling_time,ripple_il_total,ripple_vdc,saturation_events\n",
    );
    for r in &rows {
        let s = &r.summary;
        let vdc = s.segments.last().map_or(f64::NAN, |x| x.mean("Vdc"));
        let settle = s
            .tracking
            .settling_time
            .map_or_else(|| super::run::NOT_REACHED.to_string(), |t| format!("{t:.16e}"));
        let _ = writeln!(
            csv,
            "{},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{}",
            r.value,
            vdc,
            s.tracking.ss_error_pct,
            s.tracking.overshoot_pct,
            settle,
            s.ripple_il_total,
            s.ripple_vdc,
            s.saturation_events
        );
    }
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("sweep.csv"), csv)?;
    Ok(rows)
}
