//! CSV files with `#`-prefixed `key = value` metadata lines.
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! round trip unchanged.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use thermal_transient::nid::TimeConstantSpectrum;
use thermal_transient::{SignalKind, StructureFunction, TransientRecord};

use crate::error::{CliError, Result};

pub const TIME_COLUMN: &str = "time_s";
pub const TEMPERATURE_COLUMN: &str = "temperature_K";
pub const VOLTAGE_COLUMN: &str = "voltage_V";
pub const SF_COLUMNS: [&str; 2] = ["cum_R_K_per_W", "cum_C_J_per_K"];
pub const SPECTRUM_COLUMNS: [&str; 2] = ["zeta", "density"];

pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

struct Table {
    metadata: BTreeMap<String, (usize, String)>,
    columns: Vec<String>,
    rows: Vec<(usize, Vec<f64>)>,
}

fn parse_table(path: &Path, text: &str) -> Result<Table> {
    let mut metadata = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.trim_start().strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                metadata.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::format(path, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            CliError::Parse {
                path: path.into(),
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let values = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| CliError::Parse {
                    path: path.into(),
                    line,
                    message: format!("not a number: {field:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line, values));
    }
    Ok(Table {
        metadata,
        columns,
        rows,
    })
}

fn two_columns(path: &Path, table: &Table, expected: &[&str]) -> Result<(Vec<f64>, Vec<f64>)> {
    if table.columns.len() != 2 || table.columns[0] != expected[0] || !expected[1..].contains(&table.columns[1].as_str()) {
        return Err(CliError::format(
            path,
            format!(
                "expected columns {}, found {}",
                expected.join(" | "),
                table.columns.join(",")
            ),
        ));
    }
    let mut a = Vec::with_capacity(table.rows.len());
    let mut b = Vec::with_capacity(table.rows.len());
    for (line, row) in &table.rows {
        let &[x, y] = row.as_slice() else {
            return Err(CliError::Parse {
                path: path.into(),
                line: *line,
                message: format!("expected 2 fields, found {}", row.len()),
            });
        };
        a.push(x);
        b.push(y);
    }
    Ok((a, b))
}

fn metadata_number(path: &Path, table: &Table, key: &str) -> Result<Option<f64>> {
    match table.metadata.get(key) {
        None => Ok(None),
        Some((_, v)) if v.eq_ignore_ascii_case("none") => Ok(None),
        Some((line, v)) => v.parse().map(Some).map_err(|_| CliError::Parse {
            path: path.into(),
            line: *line,
            message: format!("{key}: not a number: {v:?}"),
        }),
    }
}

pub fn write_transient(path: &Path, record: &TransientRecord) -> Result<()> {
    write_atomic(path, transient_csv(record).as_bytes())
}

pub fn transient_csv(record: &TransientRecord) -> String {
    let (kind, column) = match record.kind() {
        SignalKind::Temperature => ("temperature", TEMPERATURE_COLUMN),
        SignalKind::Voltage => ("voltage", VOLTAGE_COLUMN),
    };
    let sensitivity = record
        .sensitivity()
        .map_or_else(|| "none".to_string(), |s| number(s * 1e3));
    let mut out = format!(
        "# kind = {kind}\n# power_W = {}\n# sensitivity_mV_per_K = {sensitivity}\n{TIME_COLUMN},{column}\n",
        number(record.power_step())
    );
    for (t, v) in record.times().iter().zip(record.values()) {
        out.push_str(&format!("{},{}\n", number(*t), number(*v)));
    }
    out
}

pub fn read_transient(path: &Path) -> Result<TransientRecord> {
    let table = parse_table(path, &read(path)?)?;
    let (times, values) =
        two_columns(path, &table, &[TIME_COLUMN, TEMPERATURE_COLUMN, VOLTAGE_COLUMN])?;
    let kind = match table.metadata.get("kind").map(|(_, v)| v.as_str()) {
        Some("temperature") => SignalKind::Temperature,
        Some("voltage") => SignalKind::Voltage,
        None if table.columns[1] == VOLTAGE_COLUMN => SignalKind::Voltage,
        None => SignalKind::Temperature,
        Some(other) => {
            let line = table.metadata["kind"].0;
            return Err(CliError::Parse {
                path: path.into(),
                line,
                message: format!("unknown kind {other:?}"),
            });
        }
    };
    let power = metadata_number(path, &table, "power_W")?
        .ok_or_else(|| CliError::format(path, "missing '# power_W = ...' metadata line"))?;
    let sensitivity = metadata_number(path, &table, "sensitivity_mV_per_K")?.map(|s| s * 1e-3);
    TransientRecord::new(times, values, power, sensitivity, kind)
        .map_err(|e| CliError::format(path, e.to_string()))
}

pub fn structure_function_csv(sf: &StructureFunction) -> String {
    let mut out = format!("{},{}\n", SF_COLUMNS[0], SF_COLUMNS[1]);
    for (r, c) in sf.points() {
        out.push_str(&format!("{},{}\n", number(*r), number(*c)));
    }
    out
}

pub fn write_structure_function(path: &Path, sf: &StructureFunction) -> Result<()> {
    write_atomic(path, structure_function_csv(sf).as_bytes())
}

pub fn read_structure_function(path: &Path) -> Result<StructureFunction> {
    let table = parse_table(path, &read(path)?)?;
    let (r, c) = two_columns(path, &table, &SF_COLUMNS)?;
    StructureFunction::new(r.into_iter().zip(c).collect())
        .map_err(|e| CliError::format(path, e.to_string()))
}

pub fn spectrum_csv(spectrum: &TimeConstantSpectrum) -> String {
    let mut out = format!("{},{}\n", SPECTRUM_COLUMNS[0], SPECTRUM_COLUMNS[1]);
    for (z, d) in spectrum.zeta_grid().iter().zip(spectrum.density()) {
        out.push_str(&format!("{},{}\n", number(*z), number(*d)));
    }
    out
}
