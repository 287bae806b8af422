//! Output formatting: 12-significant-digit floats, CSV emission, and a
//! matching reader for round-trip checks.
//!
//! CSV dialect: comma separator, `.` decimal point, a header line always
//! present, no quoting (no field ever contains a comma or newline).

use std::io::Write;

use crate::error::{Error, Result};

/// Render a float with 12 significant digits. Plain decimal notation inside
/// `[1e-4, 1e15)`, scientific notation outside. Zero prints as `0`.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        let leading = a.log10().floor() as i32;
        let decimals = (11 - leading).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

/// Two-decimal percentage, the census table's ratio format.
pub fn fmt_percent2(x: f64) -> String {
    format!("{x:.2}")
}

/// Write one CSV line from borrowed fields.
pub fn write_csv_line<W: Write + ?Sized>(out: &mut W, fields: &[&str]) -> Result<()> {
    debug_assert!(
        fields.iter().all(|f| !f.contains(',') && !f.contains('\n')),
        "CSV fields must not contain separators"
    );
    writeln!(out, "{}", fields.join(",")).map_err(io_err)
}

pub fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("output error: {e}"))
}

/// Parse CSV text produced by this module: lines of comma-separated fields,
/// empty lines skipped. Rows may have differing arity (the trailing verdict
/// and note lines do).
pub fn parse_csv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.to_string()).collect())
        .collect()
}

/// Pretty JSON for any serializable report.
pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("JSON encoding: {e}")))
}
