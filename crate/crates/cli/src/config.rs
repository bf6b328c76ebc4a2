//! TOML configuration merged under command-line flags.
//!
//! A config file holds global keys at the top level and one table per
//! subcommand, named as on the command line:
//!
//! ```toml
//! seed = 7
//! [tw-stats]
//! n = 50
//! samples = 20000
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

fn to_json(v: toml::Value) -> Value {
    match v {
        toml::Value::String(s) => Value::String(s),
        toml::Value::Integer(i) => Value::from(i),
        toml::Value::Float(f) => Value::from(f),
        toml::Value::Boolean(b) => Value::Bool(b),
        toml::Value::Datetime(d) => Value::String(d.to_string()),
        toml::Value::Array(a) => Value::Array(a.into_iter().map(to_json).collect()),
        toml::Value::Table(t) => Value::Object(t.into_iter().map(|(k, v)| (k.replace('-', "_"), to_json(v))).collect()),
    }
}

#[derive(Debug, Default)]
pub struct ConfigFile {
    root: Map<String, Value>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
        match to_json(toml::Value::Table(table)) {
            Value::Object(root) => Ok(Self { root }),
            _ => unreachable!(),
        }
    }

    /// Top-level scalar keys.
    pub fn globals(&self) -> Map<String, Value> {
        self.root
            .iter()
            .filter(|(_, v)| !v.is_object())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn section(&self, command: &str) -> Map<String, Value> {
        match self.root.get(&command.replace('-', "_")) {
            Some(Value::Object(m)) => m.clone(),
            _ => Map::new(),
        }
    }
}

/// Fields set on the command line win over the file; unset flags are `None`
/// and serialize to null, so they leave file values in place.
pub fn merge<T: Serialize + DeserializeOwned>(file: Map<String, Value>, flags: &T) -> Result<T> {
    let Value::Object(cli) = serde_json::to_value(flags)? else {
        bail!("flags must serialize to a map");
    };
    let mut out = file;
    for (k, v) in cli {
        if !v.is_null() {
            out.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(out)).context("invalid configuration value")
}

/// Exact rational from "3/10", "0.25" or "2".
pub fn parse_rational(s: &str) -> Result<(i64, i64)> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i64, i64) = (n.trim().parse()?, d.trim().parse()?);
        if d == 0 {
            bail!("zero denominator in {s}");
        }
        return Ok((n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            bail!("cannot read {s} as a rational");
        }
        let d = 10i64.pow(frac.len() as u32);
        let neg = int.starts_with('-');
        let ip: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse()? };
        let fp: i64 = if frac.is_empty() { 0 } else { frac.parse()? };
        let n = ip.abs() * d + fp;
        return Ok((if neg { -n } else { n }, d));
    }
    Ok((s.parse()?, 1))
}

/// "a:b" pairs, e.g. rows "0.2:2".
pub fn parse_pair<A: std::str::FromStr, B: std::str::FromStr>(s: &str) -> Result<(A, B)> {
    let (a, b) = s.split_once(':').with_context(|| format!("expected a:b, got {s}"))?;
    match (a.trim().parse(), b.trim().parse()) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => bail!("cannot parse pair {s}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Default, Serialize, Deserialize, PartialEq)]
    struct Opts {
        t: Option<f64>,
        n: Option<u32>,
    }

    #[test]
    fn flags_override_file() {
        let mut file = Map::new();
        file.insert("t".into(), Value::from(0.3));
        file.insert("n".into(), Value::from(5));
        let got = merge(file, &Opts { t: Some(0.7), n: None }).unwrap();
        assert_eq!(
            got,
            Opts {
                t: Some(0.7),
                n: Some(5)
            }
        );
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), (1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), (25, 100));
        assert_eq!(parse_rational("-1.5").unwrap(), (-15, 10));
        assert_eq!(parse_rational("2").unwrap(), (2, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
