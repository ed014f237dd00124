use serde::{Deserialize, Serialize};

use crate::{CliError, ResultBundle};

/// Named table of numbers for plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Locale-independent shortest round-trip form: integers plainly, other
/// values in exponent notation.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

/// CSV for the named series of a bundle.
pub fn emit_plot_data(bundle: &ResultBundle, series: &str) -> Result<String, CliError> {
    bundle.series.get(series).map(Series::to_csv).ok_or_else(|| {
        let known: Vec<&str> = bundle.series.keys().map(String::as_str).collect();
        CliError::Input(format!("unknown series `{series}`; this bundle has [{}]", known.join(", ")))
    })
}
