//! On-disk formats.
//!
//! Fields: the 8-byte magic `GKFIELD1`, then `m`, `side` as little-endian `u64`, the scale
//! parameter as `f64`, then `m · side²` little-endian `f64` values, component-major and
//! row-major within a component. Measures: a text table with the header `radius weight` and
//! one atom per line. Manifests: `key = value` lines.

use crate::error::{Error, Result};
use crate::lattice::Field;
use crate::measures::ReferenceMeasure;
use std::fmt::Write as _;
use std::path::Path;

const MAGIC: &[u8; 8] = b"GKFIELD1";

pub fn encode_field(field: &Field, gamma: f64) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + 8 * field.data.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(field.m as u64).to_le_bytes());
    out.extend_from_slice(&(field.side as u64).to_le_bytes());
    out.extend_from_slice(&gamma.to_le_bytes());
    for v in &field.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<(Field, f64)> {
    let bad = || Error::Io("malformed field file".into());
    if bytes.len() < 32 || &bytes[..8] != MAGIC {
        return Err(bad());
    }
    let word = |i: usize| <[u8; 8]>::try_from(&bytes[i..i + 8]).unwrap();
    let m = u64::from_le_bytes(word(8)) as usize;
    let side = u64::from_le_bytes(word(16)) as usize;
    let gamma = f64::from_le_bytes(word(24));
    let len = m.checked_mul(side * side).ok_or_else(bad)?;
    if bytes.len() != 32 + 8 * len {
        return Err(bad());
    }
    let data = (0..len).map(|i| f64::from_le_bytes(word(32 + 8 * i))).collect();
    Ok((Field { side, m, data }, gamma))
}

pub fn write_field(path: &Path, field: &Field, gamma: f64) -> Result<()> {
    Ok(std::fs::write(path, encode_field(field, gamma))?)
}

pub fn read_field(path: &Path) -> Result<(Field, f64)> {
    decode_field(&std::fs::read(path)?)
}

pub fn measure_table(measure: &ReferenceMeasure) -> String {
    let mut s = format!("# m = {}\n# label = {}\nradius weight\n", measure.m, measure.label);
    for (r, w) in measure.radii.iter().zip(&measure.weights) {
        let _ = writeln!(s, "{r:.17e} {w:.17e}");
    }
    s
}

pub fn parse_measure_table(text: &str, m: usize) -> Result<ReferenceMeasure> {
    let (mut radii, mut weights) = (Vec::new(), Vec::new());
    let mut header = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header {
            if line.split_whitespace().collect::<Vec<_>>() != ["radius", "weight"] {
                return Err(Error::Config { line: i + 1, message: "expected header `radius weight`".into() });
            }
            header = true;
            continue;
        }
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|c| c.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config { line: i + 1, message: e.to_string() })?;
        if cols.len() != 2 {
            return Err(Error::Config { line: i + 1, message: "expected two columns".into() });
        }
        radii.push(cols[0]);
        weights.push(cols[1]);
    }
    ReferenceMeasure::new(m, radii, weights, "table")
}

pub fn manifest_text(entries: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in entries {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}
