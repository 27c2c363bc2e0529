//! Line-oriented `key = value` reports with stable key order.
//!
//! Numbers are written in the shortest decimal form that reads back to the same `f64`
//! (never more than 17 significant digits). Very large or very small magnitudes switch
//! to exponent notation, and `-0` is written as `0`.

use std::fmt;

/// Shortest round-trip decimal representation of `x`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueReport {
    entries: Vec<(String, String)>,
}

impl KeyValueReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn number(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.entries.push((key.into(), format_number(value)));
        self
    }

    pub fn extend(&mut self, other: &KeyValueReport) -> &mut Self {
        self.entries.extend(other.entries.iter().cloned());
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for KeyValueReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
