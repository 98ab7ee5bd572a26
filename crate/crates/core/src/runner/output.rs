//! CSV and JSON-lines writers.
//!
//! CSV files start with `#` comment lines, use `,` separators, LF line
//! endings and print floats as `{:.16e}` (17 significant digits, so values
//! parse back bit-exactly).

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_analysis::{ConvergenceRow, ConvergenceTable};
use crate::weak_space::WeakFunction;

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// A row that can be written as one CSV line.
pub trait CsvRecord {
    fn columns() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// One sampled value; `exact` and `abs_diff` are empty without a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: usize,
    pub n_elements: usize,
    pub nu: f64,
    pub t: f64,
    pub x: f64,
    pub numerical: f64,
    pub exact: Option<f64>,
    pub abs_diff: Option<f64>,
}

impl TableRow {
    pub fn new(k: usize, n_elements: usize, nu: f64, t: f64, x: f64, numerical: f64, exact: Option<f64>) -> Self {
        Self {
            k,
            n_elements,
            nu,
            t,
            x,
            numerical,
            exact,
            abs_diff: exact.map(|e| (numerical - e).abs()),
        }
    }
}

impl CsvRecord for TableRow {
    fn columns() -> &'static [&'static str] {
        &["k", "n_elements", "nu", "t", "x", "numerical", "exact", "abs_diff"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            self.n_elements.to_string(),
            fmt_float(self.nu),
            fmt_float(self.t),
            fmt_float(self.x),
            fmt_float(self.numerical),
            fmt_opt(self.exact),
            fmt_opt(self.abs_diff),
        ]
    }
}

impl CsvRecord for ConvergenceRow {
    fn columns() -> &'static [&'static str] {
        &["N", "h", "tau", "l2_error", "h1_error", "l2_rate", "h1_rate"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.n_elements.to_string(),
            fmt_float(self.h),
            fmt_float(self.tau),
            fmt_float(self.l2_error),
            fmt_float(self.h1_error),
            fmt_opt(self.l2_rate),
            fmt_opt(self.h1_rate),
        ]
    }
}

/// Per-element slice of a stored state: node values at both ends plus the
/// interior Legendre coefficients on the reference element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub t: f64,
    pub element: usize,
    pub x_left: f64,
    pub x_right: f64,
    pub node_left: f64,
    pub node_right: f64,
    pub coeffs: Vec<f64>,
}

impl StateRow {
    pub fn from_state(t: f64, nodes: &[f64], u: &WeakFunction) -> Vec<StateRow> {
        let nv = u.node_values();
        (0..u.n_elements())
            .map(|e| StateRow {
                t,
                element: e,
                x_left: nodes[e],
                x_right: nodes[e + 1],
                node_left: nv[e],
                node_right: nv[e + 1],
                coeffs: u.interior(e).to_vec(),
            })
            .collect()
    }
}

fn write_line<W: Write>(out: &mut W, fields: &[String]) -> io::Result<()> {
    out.write_all(fields.join(",").as_bytes())?;
    out.write_all(b"\n")
}

fn write_header<W: Write>(out: &mut W, header: &str) -> io::Result<()> {
    for line in header.lines() {
        if line.starts_with('#') {
            writeln!(out, "{line}")?;
        } else {
            writeln!(out, "# {line}")?;
        }
    }
    Ok(())
}

pub fn write_csv<W: Write, R: CsvRecord>(out: &mut W, header: &str, rows: &[R]) -> io::Result<()> {
    write_header(out, header)?;
    write_line(out, &R::columns().iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
    for r in rows {
        write_line(out, &r.fields())?;
    }
    Ok(())
}

/// First line `{"header": [...]}` carrying the comment block, then one object per row.
pub fn write_jsonl<W: Write, R: Serialize>(out: &mut W, header: &str, rows: &[R]) -> io::Result<()> {
    let lines: Vec<&str> = header.lines().map(|l| l.trim_start_matches('#').trim()).collect();
    serde_json::to_writer(&mut *out, &serde_json::json!({ "header": lines }))?;
    out.write_all(b"\n")?;
    for r in rows {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Convergence table followed by a `slope` line holding the least-squares
/// slopes in the rate columns.
pub fn write_convergence_csv<W: Write>(out: &mut W, header: &str, table: &ConvergenceTable) -> io::Result<()> {
    write_csv(out, header, &table.rows)?;
    write_line(
        out,
        &[
            "slope".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            fmt_opt(table.l2_slope),
            fmt_opt(table.h1_slope),
        ],
    )
}

pub fn write_convergence_jsonl<W: Write>(out: &mut W, header: &str, table: &ConvergenceTable) -> io::Result<()> {
    write_jsonl(out, header, &table.rows)?;
    serde_json::to_writer(
        &mut *out,
        &serde_json::json!({ "l2_slope": table.l2_slope, "h1_slope": table.h1_slope }),
    )?;
    out.write_all(b"\n")
}

impl CsvRecord for StateRow {
    fn columns() -> &'static [&'static str] {
        &["t", "element", "x_left", "x_right", "node_left", "node_right", "coeffs"]
    }

    /// Coefficients are `;`-separated inside the last column.
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_float(self.t),
            self.element.to_string(),
            fmt_float(self.x_left),
            fmt_float(self.x_right),
            fmt_float(self.node_left),
            fmt_float(self.node_right),
            self.coeffs.iter().map(|c| fmt_float(*c)).collect::<Vec<_>>().join(";"),
        ]
    }
}

fn parse_err(line: usize, key: &str, message: String) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message,
    }
}

/// Parses a `TableRow` CSV, checking `abs_diff == |numerical − exact|` on every row.
pub fn read_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if !seen_header {
            if f != TableRow::columns() {
                return Err(parse_err(lineno, "columns", format!("unexpected header `{line}`")));
            }
            seen_header = true;
            continue;
        }
        if f.len() != TableRow::columns().len() {
            return Err(parse_err(lineno, "row", format!("expected 8 fields, found {}", f.len())));
        }
        let num = |i: usize| -> Result<f64> {
            f[i].parse::<f64>()
                .map_err(|e| parse_err(lineno, TableRow::columns()[i], e.to_string()))
        };
        let opt = |i: usize| -> Result<Option<f64>> { if f[i].is_empty() { Ok(None) } else { num(i).map(Some) } };
        let int = |i: usize| -> Result<usize> {
            f[i].parse::<usize>()
                .map_err(|e| parse_err(lineno, TableRow::columns()[i], e.to_string()))
        };
        let row = TableRow::new(int(0)?, int(1)?, num(2)?, num(3)?, num(4)?, num(5)?, opt(6)?);
        let stored = opt(7)?;
        if stored.map(f64::to_bits) != row.abs_diff.map(f64::to_bits) {
            return Err(parse_err(
                lineno,
                "abs_diff",
                format!("stored {stored:?} but |numerical - exact| = {:?}", row.abs_diff),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let rows = vec![
            TableRow::new(1, 128, 0.1, 0.1, 0.5, 0.877_283_195_114_1, Some(0.877_28)),
            TableRow::new(0, 80, 0.1, 0.1, 1.0 / 3.0, -1e-300, None),
            TableRow::new(0, 80, 0.1, 0.1, 0.7, f64::MIN_POSITIVE, Some(std::f64::consts::PI)),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, "# test\n# sigma = 2", &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.starts_with("# test\n# sigma = 2\nk,n_elements"));
        let back = read_table_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.numerical.to_bits(), b.numerical.to_bits());
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tampered_difference_is_rejected() {
        let rows = vec![TableRow::new(1, 80, 0.1, 0.1, 0.5, 0.5, Some(0.25))];
        let mut buf = Vec::new();
        write_csv(&mut buf, "", &rows).unwrap();
        let text = String::from_utf8(buf).unwrap().replace(&fmt_float(0.25), &fmt_float(0.3));
        // both exact and abs_diff held 0.25; after the edit they disagree
        assert!(matches!(read_table_csv(&text), Err(Error::Config { key, .. }) if key == "abs_diff"));
    }

    #[test]
    fn floats_have_seventeen_significant_digits() {
        let s = fmt_float(0.1);
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
    }

    #[test]
    fn jsonl_lines_parse() {
        let rows = vec![TableRow::new(1, 80, 0.1, 0.1, 0.5, 0.5, None)];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, "# a = 1", &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let back: TableRow = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(back, rows[0]);
    }
}
