//! Report assembly and serialization.
//!
//! Verification campaigns produce one [`Report`]; table commands produce a
//! [`Table`]. JSON output is schema-versioned; CSV columns are fixed per
//! kind. Float cells print through Rust's shortest round-trip formatting,
//! so identical values serialize identically regardless of thread count.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Row {
    pub n: u64,
    pub numeric: f64,
    pub predicted: f64,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub campaign: String,
    pub config_echo: serde_json::Value,
    pub rows: Vec<Row>,
    /// Least-squares slope of ln|residual| vs ln n; absent where no decay
    /// rate is claimed (gradient, envelope).
    pub fitted_slope: Option<f64>,
    pub expected_slope_interval: Option<(f64, f64)>,
    pub passed: bool,
    pub runtime_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports are plain data");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,numeric,predicted,residual\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n, r.numeric, r.predicted, r.residual));
        }
        out
    }

    pub fn summary_line(&self) -> String {
        let slope = match self.fitted_slope {
            Some(s) => format!("slope {s:.4}"),
            None => "no slope fit".to_string(),
        };
        let interval = match self.expected_slope_interval {
            Some((a, b)) => format!(" (expected [{a}, {b}])"),
            None => String::new(),
        };
        format!(
            "{}: {} over {} rows{} -> {}",
            self.campaign,
            slope,
            self.rows.len(),
            interval,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// A plain data table (zeros, unperturbed, spectrum) with fixed columns.
#[derive(Debug)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub config_echo: serde_json::Value,
    /// One entry per column per row; the first column is the index.
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for (c, v) in self.columns.iter().zip(row) {
                if !first {
                    out.push(',');
                }
                first = false;
                if *c == "n" {
                    out.push_str(&format!("{}", *v as u64));
                } else {
                    out.push_str(&format!("{v}"));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct JsonTable<'a> {
            schema: u32,
            table: &'a str,
            config_echo: &'a serde_json::Value,
            columns: &'a [&'static str],
            rows: &'a [Vec<f64>],
        }
        let mut s = serde_json::to_string_pretty(&JsonTable {
            schema: SCHEMA,
            table: self.name,
            config_echo: &self.config_echo,
            columns: &self.columns,
            rows: &self.rows,
        })
        .expect("tables are plain data");
        s.push('\n');
        s
    }
}

/// Write `content` chosen by the `--out` extension, or the fallback to
/// stdout when no path is given.
pub fn emit(
    out: Option<&Path>,
    csv: impl FnOnce() -> String,
    json: impl FnOnce() -> String,
    stdout_fallback: impl FnOnce() -> String,
) -> Result<(), String> {
    match out {
        None => {
            print!("{}", stdout_fallback());
            std::io::stdout().flush().map_err(|e| format!("stdout: {e}"))
        }
        Some(path) => {
            let content = match path.extension().and_then(|s| s.to_str()) {
                Some("csv") => csv(),
                Some("json") => json(),
                other => {
                    return Err(format!(
                        "--out must end in .csv or .json, got {:?}",
                        other.unwrap_or("")
                    ))
                }
            };
            std::fs::write(path, content)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_columns_and_integer_index() {
        let t = Table {
            name: "zeros",
            columns: vec!["n", "zero"],
            config_echo: serde_json::json!({}),
            rows: vec![vec![1.0, -1.0188], vec![2.0, -3.2482]],
        };
        let csv = t.to_csv();
        assert!(csv.starts_with("n,zero\n1,-1.0188\n2,"), "{csv}");
    }

    #[test]
    fn report_json_keeps_null_slope_fields() {
        let r = Report {
            schema: SCHEMA,
            campaign: "envelope".into(),
            config_echo: serde_json::json!({}),
            rows: vec![],
            fitted_slope: None,
            expected_slope_interval: None,
            passed: true,
            runtime_ms: 3,
        };
        let j = r.to_json();
        assert!(j.contains("\"fitted_slope\": null"), "{j}");
        assert!(j.contains("\"schema\": 1"));
    }
}
