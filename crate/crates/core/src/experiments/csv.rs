use std::fmt::Write as _;

/// Significant digits of ordinary table cells.
pub const DEFAULT_DIGITS: usize = 12;
/// Significant digits that reproduce any `f64` exactly when parsed back.
pub const ROUND_TRIP_DIGITS: usize = 17;

/// Comma-separated table with `#` metadata lines before the header and
/// optional `#` footer lines after the data. Numbers are written in
/// scientific notation with [`CsvTable::digits`] significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    /// Optional text first column; when non-empty it has one entry per row.
    pub row_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub footer: Vec<(String, String)>,
    pub digits: usize,
}

impl Default for CsvTable {
    fn default() -> Self {
        Self {
            metadata: Vec::new(),
            header: Vec::new(),
            row_labels: Vec::new(),
            rows: Vec::new(),
            footer: Vec::new(),
            digits: DEFAULT_DIGITS,
        }
    }
}

pub fn format_number(v: f64) -> String {
    format_digits(v, DEFAULT_DIGITS)
}

pub fn format_digits(v: f64, digits: usize) -> String {
    let precision = digits.saturating_sub(1);
    // avoid a negative zero
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.precision$e}")
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let offset = usize::from(!self.row_labels.is_empty());
        let idx = self.header.iter().position(|h| h == name)?.checked_sub(offset)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = self.row_labels.get(i).cloned().into_iter().collect();
            cells.extend(row.iter().map(|v| format_digits(*v, self.digits)));
            let _ = writeln!(out, "{}", cells.join(","));
        }
        for (k, v) in &self.footer {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out
    }
}
