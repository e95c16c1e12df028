//! Tabular report writer with byte-reproducible CSV and JSON encodings.
//!
//! CSV uses '.' decimal separator, no grouping, LF line endings, a header
//! row always present, and '#'-prefixed lines echoing the library version
//! and the full run configuration. Floats are formatted with Rust's
//! shortest round-trip representation, so every numeric cell parses back to
//! the identical value.

use std::fmt::Write as _;

/// One table cell. `Count` carries exact permutation counts, which JSON
/// encodes as strings so values above 2^53 survive untruncated.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Count(u128),
    /// Empty cell (e.g. a count beyond the exact range).
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v}"),
            Cell::Text(v) => v.clone(),
            Cell::Count(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Value::from(*v),
            Cell::Text(v) => serde_json::Value::from(v.as_str()),
            Cell::Count(v) => serde_json::Value::from(v.to_string()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// A finished run: config echo, column names, data rows, and which two
/// columns form the (x, y) plot series.
pub struct Report {
    pub config: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub plot: (usize, usize),
}

impl Report {
    pub fn new(columns: Vec<&'static str>, plot: (usize, usize)) -> Self {
        Self {
            config: Vec::new(),
            columns,
            rows: Vec::new(),
            plot,
        }
    }

    pub fn set_config(&mut self, entries: Vec<(String, String)>) {
        self.config = entries;
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, plot_only: bool) -> String {
        let mut out = String::new();
        writeln!(out, "# norlund {}", norlund_core::VERSION).unwrap();
        for (k, v) in &self.config {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        let cols: Vec<usize> = if plot_only {
            vec![self.plot.0, self.plot.1]
        } else {
            (0..self.columns.len()).collect()
        };
        let header: Vec<&str> = cols.iter().map(|&i| self.columns[i]).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = cols.iter().map(|&i| row[i].csv()).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self, plot_only: bool) -> String {
        let cols: Vec<usize> = if plot_only {
            vec![self.plot.0, self.plot.1]
        } else {
            (0..self.columns.len()).collect()
        };
        let config: serde_json::Map<String, serde_json::Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::from(v.as_str())))
            .collect();
        let value = serde_json::json!({
            "version": norlund_core::VERSION,
            "config": config,
            "columns": cols.iter().map(|&i| self.columns[i]).collect::<Vec<_>>(),
            "rows": self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&i| r[i].json()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
        text.push('\n');
        text
    }
}
