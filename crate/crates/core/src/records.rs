//! Plain-text key/value record blocks.
//!
//! ```text
//! [experiment]
//! scheme = flex
//! success = true
//!
//! [experiment]
//! ...
//! ```
//!
//! Keys keep insertion order, so a record printed twice from the same data is
//! byte-identical. Values are single-line strings.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub title: String,
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn new(title: impl Into<String>) -> Self {
        Record {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    /// Appends an entry. Newlines in the value are replaced by spaces.
    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        let value = value.to_string().replace(['\n', '\r'], " ");
        self.entries.push((key.into(), value));
        self
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

    /// A copy without the entries whose key satisfies `drop`.
    pub fn without(&self, drop: impl Fn(&str) -> bool) -> Record {
        Record {
            title: self.title.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| !drop(k))
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.title)?;
        for (k, v) in &self.entries {
            if v.is_empty() {
                writeln!(f, "{k} =")?;
            } else {
                writeln!(f, "{k} = {v}")?;
            }
        }
        Ok(())
    }
}

/// Joins blocks with a blank line between them.
pub fn format_records(records: &[Record]) -> String {
    records
        .iter()
        .map(Record::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut out: Vec<Record> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(title) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push(Record::new(title));
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let record = out
            .last_mut()
            .ok_or_else(|| Error::Parse(format!("line {}: entry before any [title] header", lineno + 1)))?;
        record.entries.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
