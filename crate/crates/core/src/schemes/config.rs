//! Scheme configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! scheme = flex-redundant
//! field = 11
//! P = 2
//! X = 1
//! S = 1
//! t = 2
//! s = 4
//! r = 3
//! seed = 7
//! zero_set = 5,6
//! pad = false
//! ```
//!
//! `field` is optional and accepts any field spec (`q`, `p^m` or
//! `p^m/c0,...,cm`); without it the smallest field the scheme supports is used.
//! Keys are case-sensitive, appear at most once, and unknown keys are errors.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Field;

use super::{build_scheme, default_field, Scheme, SchemeKind, SchemeParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    pub field: Option<Field>,
    pub partitions: usize,
    pub collusion: usize,
    pub stragglers: usize,
    pub rows: usize,
    pub inner: usize,
    pub cols: usize,
    pub seed: u64,
    /// 0-based worker indices where the decoding vector vanishes.
    pub zero_set: Option<Vec<usize>>,
    pub pad: bool,
}

const KEYS: [&str; 11] = ["scheme", "field", "P", "X", "S", "t", "s", "r", "seed", "zero_set", "pad"];

impl SchemeConfig {
    /// A configuration with `t = s = r = P`, seed 0 and the default field.
    pub fn new(scheme: SchemeKind, partitions: usize, collusion: usize, stragglers: usize) -> Self {
        SchemeConfig {
            scheme,
            field: None,
            partitions,
            collusion,
            stragglers,
            rows: partitions,
            inner: partitions,
            cols: partitions,
            seed: 0,
            zero_set: None,
            pad: false,
        }
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = Some(field);
        self
    }

    pub fn with_dims(mut self, rows: usize, inner: usize, cols: usize) -> Self {
        self.rows = rows;
        self.inner = inner;
        self.cols = cols;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_zero_set(mut self, zero_set: Vec<usize>) -> Self {
        self.zero_set = Some(zero_set);
        self
    }

    pub fn worker_count(&self) -> usize {
        self.scheme
            .worker_count(self.partitions, self.collusion, self.stragglers)
    }

    /// The configured field, or the scheme's default for its worker count.
    pub fn resolve_field(&self) -> Result<Field> {
        match &self.field {
            Some(f) => Ok(f.clone()),
            None => default_field(self.scheme, self.worker_count()),
        }
    }

    pub fn params(&self) -> Result<SchemeParams> {
        Ok(SchemeParams::new(
            self.scheme,
            self.resolve_field()?,
            self.partitions,
            self.collusion,
            self.stragglers,
        )
        .with_dims(self.rows, self.inner, self.cols)
        .with_padding(self.pad))
    }

    pub fn build(&self) -> Result<Box<dyn Scheme>> {
        build_scheme(self.params()?, None, self.zero_set.clone())
    }

    /// Serializes every key in a fixed order. The field is written out
    /// explicitly when resolvable so the file pins it.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scheme = {}", self.scheme);
        if let Ok(field) = self.resolve_field() {
            let _ = writeln!(out, "field = {field}");
        }
        let _ = writeln!(out, "P = {}", self.partitions);
        let _ = writeln!(out, "X = {}", self.collusion);
        let _ = writeln!(out, "S = {}", self.stragglers);
        let _ = writeln!(out, "t = {}", self.rows);
        let _ = writeln!(out, "s = {}", self.inner);
        let _ = writeln!(out, "r = {}", self.cols);
        let _ = writeln!(out, "seed = {}", self.seed);
        if let Some(z) = &self.zero_set {
            let _ = writeln!(out, "zero_set = {}", join_indices(z));
        }
        let _ = writeln!(out, "pad = {}", self.pad);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values: Vec<Option<String>> = vec![None; KEYS.len()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Parse(format!("line {}: unknown key `{key}`", lineno + 1)))?;
            if values[slot].replace(value.to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        let get = |key: &str| values[KEYS.iter().position(|k| *k == key).unwrap()].as_deref();
        let scheme: SchemeKind = get("scheme")
            .ok_or_else(|| Error::Parse("missing key `scheme`".into()))?
            .parse()?;
        let partitions = parse_usize(get("P").ok_or_else(|| Error::Parse("missing key `P`".into()))?, "P")?;
        let collusion = parse_usize(get("X").ok_or_else(|| Error::Parse("missing key `X`".into()))?, "X")?;
        let stragglers = get("S").map(|v| parse_usize(v, "S")).transpose()?.unwrap_or(0);
        let mut config = SchemeConfig::new(scheme, partitions, collusion, stragglers);
        if let Some(f) = get("field") {
            config.field = Some(f.parse()?);
        }
        if let Some(v) = get("t") {
            config.rows = parse_usize(v, "t")?;
        }
        if let Some(v) = get("s") {
            config.inner = parse_usize(v, "s")?;
        }
        if let Some(v) = get("r") {
            config.cols = parse_usize(v, "r")?;
        }
        if let Some(v) = get("seed") {
            config.seed = v
                .parse()
                .map_err(|_| Error::Parse(format!("seed: `{v}` is not an unsigned integer")))?;
        }
        if let Some(v) = get("zero_set") {
            config.zero_set = Some(parse_indices(v)?);
        }
        if let Some(v) = get("pad") {
            config.pad = match v {
                "true" => true,
                "false" => false,
                _ => return Err(Error::Parse(format!("pad: expected true or false, got `{v}`"))),
            };
        }
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_config_string())?)
    }
}

fn parse_usize(v: &str, key: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::Parse(format!("{key}: `{v}` is not a non-negative integer")))
}

/// Parses a comma-separated index list; the empty string is the empty list.
pub fn parse_indices(v: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_usize(s, "index"))
        .collect()
}

pub fn join_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = SchemeConfig::new(SchemeKind::FlexRedundant, 2, 1, 1)
            .with_dims(2, 4, 3)
            .with_seed(99)
            .with_zero_set(vec![4, 5]);
        let text = c.to_config_string();
        let back = SchemeConfig::parse(&text).unwrap();
        assert_eq!(back.field, Some(Field::with_order(7).unwrap()));
        assert_eq!(back.to_config_string(), text);
        assert_eq!(back.with_field_cleared(), c);
    }

    impl SchemeConfig {
        fn with_field_cleared(mut self) -> Self {
            self.field = None;
            self
        }
    }

    #[test]
    fn defaults_and_comments() {
        let c = SchemeConfig::parse("# a dft run\nscheme = dft\nP = 2  # blocks\nX = 1\n\n").unwrap();
        assert_eq!(c.stragglers, 0);
        assert_eq!((c.rows, c.inner, c.cols), (2, 2, 2));
        assert_eq!(c.resolve_field().unwrap().order(), 5);
        assert!(c.build().is_ok());
    }

    #[test]
    fn extension_field_spec() {
        let c = SchemeConfig::parse("scheme = flex\nfield = 2^3\nP = 2\nX = 2").unwrap();
        assert_eq!(c.resolve_field().unwrap().order(), 8);
        let again = SchemeConfig::parse(&c.to_config_string()).unwrap();
        assert_eq!(again.field, c.field);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "scheme = flex\nP = 1",
            "scheme = flex\nP = 1\nX = 1\nbogus = 3",
            "scheme = flex\nP = 1\nX = 1\nX = 2",
            "scheme = nope\nP = 1\nX = 1",
            "scheme = flex\nP = -1\nX = 1",
            "scheme = flex\nP = 1\nX = 1\npad = yes",
            "scheme flex",
        ] {
            assert!(matches!(SchemeConfig::parse(text), Err(Error::Parse(_))), "{text}");
        }
    }
}
