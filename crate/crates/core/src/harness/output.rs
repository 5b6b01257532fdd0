use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// `x` with 17 significant digits, so that parsing it back gives `x` exactly.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Compact JSON with every float at 17 significant digits.
struct SignificantFloats;

impl serde_json::ser::Formatter for SignificantFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// First 16 hex digits of the SHA-256 of the config's canonical JSON.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    let digest = Sha256::digest(&bytes);
    Ok(format!("{digest:x}")[..16].to_string())
}

/// A CSV table. Callers add rows of already formatted cells; [`Table::float`]
/// formats numbers consistently.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// A table whose first two columns are `seed` and `config_hash`.
    pub fn new(columns: &[&str]) -> Self {
        let mut header = vec!["seed".to_string(), "config_hash".to_string()];
        header.extend(columns.iter().map(|c| c.to_string()));
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, seed: u64, hash: &str, cells: Vec<String>) {
        let mut row = vec![seed.to_string(), hash.to_string()];
        row.extend(cells);
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn float(x: f64) -> String {
        fmt_float(x)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("cells are UTF-8"))
    }
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e.to_string())
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`; returns both paths.
pub fn write_outputs<T: Serialize>(dir: &Path, name: &str, table: &Table, summary: &T) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{name}.csv"));
    let json_path = dir.join(format!("{name}.json"));
    fs::write(&csv_path, table.to_csv()?)?;
    fs::write(&json_path, to_json(summary)?)?;
    Ok((csv_path, json_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').len(), 18);
        }
        let json = to_json(&vec![0.1f64, 2.0]).unwrap();
        assert_eq!(json, "[1.0000000000000001e-1,2.0000000000000000e0]");
        let back: Vec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![0.1, 2.0]);
    }

    #[test]
    fn table_carries_seed_and_hash() {
        let mut t = Table::new(&["x"]);
        t.push(7, "abc", vec![Table::float(0.5)]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "seed,config_hash,x\n7,abc,5.0000000000000000e-1\n");
        let h1 = config_hash(&vec![1, 2]).unwrap();
        assert_eq!(h1.len(), 16);
        assert_ne!(h1, config_hash(&vec![1, 3]).unwrap());
    }
}
