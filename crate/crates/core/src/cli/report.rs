//! Ordered key/value reports with a human and a machine rendering.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// Flat `key=value` lines.
    Machine,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k}={v}");
                }
            }
            Format::Text => {
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
            }
        }
        out
    }
}

/// Parses machine output back into pairs.
pub fn parse_machine(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
