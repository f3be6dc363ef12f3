//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment. Numbers may carry a unit
//! suffix matching the key's dimension; values without a suffix are SI (rad/s
//! for frequencies). Frequency suffixes denote ordinary frequency and are
//! converted to angular frequency (`x 2 pi`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Text,
    List,
    Count,
    Dimensionless,
    Capacitance,
    Inductance,
    Length,
    EoCoefficient,
    AngularFrequency,
    Power,
    Temperature,
    Time,
}

impl Dimension {
    fn suffixes(self) -> &'static [(&'static str, f64)] {
        const HZ: f64 = 2.0 * PI;
        match self {
            Dimension::Capacitance => &[("fF", 1e-15), ("pF", 1e-12), ("F", 1.0)],
            Dimension::Inductance => &[("nH", 1e-9), ("uH", 1e-6), ("H", 1.0)],
            Dimension::Length => &[("nm", 1e-9), ("um", 1e-6), ("mm", 1e-3), ("m", 1.0)],
            Dimension::EoCoefficient => &[("pm/V", 1e-12), ("m/V", 1.0)],
            Dimension::AngularFrequency => &[
                ("THz", HZ * 1e12),
                ("GHz", HZ * 1e9),
                ("MHz", HZ * 1e6),
                ("kHz", HZ * 1e3),
                ("Hz", HZ),
                ("rad/s", 1.0),
            ],
            Dimension::Power => &[("uW", 1e-6), ("mW", 1e-3), ("W", 1.0)],
            Dimension::Temperature => &[("mK", 1e-3), ("K", 1.0)],
            Dimension::Time => &[("ns", 1e-9), ("us", 1e-6), ("ms", 1e-3), ("s", 1.0)],
            _ => &[],
        }
    }
}

/// Recognised keys and their dimensions.
pub const KEYS: &[(&str, Dimension)] = &[
    ("scenario", Dimension::Text),
    ("scheme", Dimension::Text),
    ("device", Dimension::Text),
    ("output", Dimension::Text),
    ("curves", Dimension::List),
    ("eo_coefficient", Dimension::EoCoefficient),
    ("gap", Dimension::Length),
    ("C1", Dimension::Capacitance),
    ("C2", Dimension::Capacitance),
    ("L1", Dimension::Inductance),
    ("L2", Dimension::Inductance),
    ("cavity_frequency", Dimension::AngularFrequency),
    ("pump_power", Dimension::Power),
    ("cavity_loss", Dimension::AngularFrequency),
    ("pump_linewidth", Dimension::AngularFrequency),
    ("resonator_loss", Dimension::AngularFrequency),
    ("resonator_loss1", Dimension::AngularFrequency),
    ("resonator_loss2", Dimension::AngularFrequency),
    ("detuning1", Dimension::AngularFrequency),
    ("detuning2", Dimension::AngularFrequency),
    ("temperature", Dimension::Temperature),
    ("t2", Dimension::Time),
    ("r", Dimension::Dimensionless),
    ("k", Dimension::Dimensionless),
    ("k0", Dimension::Dimensionless),
    ("k1", Dimension::Dimensionless),
    ("k2", Dimension::Dimensionless),
    ("n_th", Dimension::Dimensionless),
    ("n_th0", Dimension::Dimensionless),
    ("n_th1", Dimension::Dimensionless),
    ("n_th2", Dimension::Dimensionless),
    ("tau1", Dimension::Dimensionless),
    ("tau2", Dimension::Dimensionless),
    ("grid_from", Dimension::Dimensionless),
    ("grid_to", Dimension::Dimensionless),
    ("grid_points", Dimension::Count),
];

pub fn key_dimension(key: &str) -> Option<Dimension> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Number(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: Value,
    pub line: usize,
    pub column: usize,
}

/// Parsed assignments, keyed by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, Entry>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(eq) = content.find('=') else {
                let col = content.len() - content.trim_start().len() + 1;
                return Err(Error::config(line, col, "expected `key = value`"));
            };
            let key = content[..eq].trim();
            let key_col = content.len() - content.trim_start().len() + 1;
            if key.is_empty() {
                return Err(Error::config(line, key_col, "missing key before `=`"));
            }
            let Some(dim) = key_dimension(key) else {
                return Err(Error::config(line, key_col, format!("unknown key `{key}`")));
            };
            if let Some(prev) = entries.get(key) {
                let prev: &Entry = prev;
                return Err(Error::config(
                    line,
                    key_col,
                    format!("duplicate key `{key}` (first set on line {})", prev.line),
                ));
            }
            let rest = &content[eq + 1..];
            let value_text = rest.trim();
            let value_col = eq + 2 + (rest.len() - rest.trim_start().len());
            if value_text.is_empty() {
                return Err(Error::config(line, value_col, format!("missing value for `{key}`")));
            }
            let value = parse_value(value_text, dim).map_err(|msg| Error::config(line, value_col, msg))?;
            entries.insert(key.to_string(), Entry { value, line, column: value_col });
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Sets or replaces a value programmatically (line 0 marks an override).
    pub fn set(&mut self, key: &str, value: Value) -> Result<()> {
        let dim = key_dimension(key).ok_or_else(|| Error::config(0, 0, format!("unknown key `{key}`")))?;
        let ok = matches!(
            (&value, dim),
            (Value::Text(_), Dimension::Text) | (Value::List(_), Dimension::List)
        ) || matches!(&value, Value::Number(_)) && !matches!(dim, Dimension::Text | Dimension::List);
        if !ok {
            return Err(Error::config(0, 0, format!("value of the wrong kind for `{key}`")));
        }
        if let (Value::Number(v), Dimension::Count) = (&value, dim) {
            if v.fract() != 0.0 || *v < 0.0 {
                return Err(Error::config(0, 0, format!("`{key}` must be a non-negative integer")));
            }
        }
        self.entries.insert(key.to_string(), Entry { value, line: 0, column: 0 });
        Ok(())
    }

    /// Sets a numeric key from text with optional unit suffix.
    pub fn set_str(&mut self, key: &str, text: &str) -> Result<()> {
        let dim = key_dimension(key).ok_or_else(|| Error::config(0, 0, format!("unknown key `{key}`")))?;
        let value = parse_value(text.trim(), dim).map_err(|msg| Error::config(0, 0, format!("{key}: {msg}")))?;
        self.entries.insert(key.to_string(), Entry { value, line: 0, column: 0 });
        Ok(())
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.get(key).map(|e| &e.value) {
            Some(Value::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.get(key).map(|e| &e.value) {
            Some(Value::Number(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        match self.get(key).map(|e| &e.value) {
            Some(Value::List(v)) => Some(v),
            _ => None,
        }
    }

    /// Configuration error located at `key`'s assignment.
    pub fn error_at(&self, key: &str, message: impl Into<String>) -> Error {
        let (line, column) = self.get(key).map_or((0, 0), |e| (e.line, e.column));
        Error::config(line, column, message)
    }
}

fn parse_value(text: &str, dim: Dimension) -> std::result::Result<Value, String> {
    match dim {
        Dimension::Text => {
            if text.chars().any(char::is_whitespace) {
                return Err(format!("`{text}` must be a single word"));
            }
            Ok(Value::Text(text.to_string()))
        }
        Dimension::List => text
            .split(',')
            .map(|item| parse_number(item.trim(), Dimension::Dimensionless))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Value::List),
        Dimension::Count => {
            let n: u64 = text.parse().map_err(|_| format!("`{text}` is not a non-negative integer"))?;
            Ok(Value::Number(n as f64))
        }
        _ => parse_number(text, dim).map(Value::Number),
    }
}

fn parse_number(text: &str, dim: Dimension) -> std::result::Result<f64, String> {
    // longest numeric prefix, then a unit suffix
    let split = text
        .char_indices()
        .find(|&(i, ch)| {
            !(ch.is_ascii_digit()
                || ch == '.'
                || ch == '+'
                || ch == '-'
                || ((ch == 'e' || ch == 'E')
                    && text[i + 1..].starts_with(|c: char| c.is_ascii_digit() || c == '+' || c == '-')))
        })
        .map_or(text.len(), |(i, _)| i);
    let (num, unit) = (&text[..split], text[split..].trim());
    let value: f64 = num.parse().map_err(|_| format!("`{text}` is not a number"))?;
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    if unit.is_empty() {
        return Ok(value);
    }
    let suffixes = dim.suffixes();
    match suffixes.iter().find(|(s, _)| *s == unit) {
        Some((_, scale)) => Ok(value * scale),
        None if suffixes.is_empty() => Err(format!("`{text}`: this key takes a plain number")),
        None => Err(format!(
            "unknown unit `{unit}` (expected one of {})",
            suffixes.iter().map(|(s, _)| *s).collect::<Vec<_>>().join(", ")
        )),
    }
}
