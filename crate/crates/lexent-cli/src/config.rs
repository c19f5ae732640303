//! Key=value config file. Precedence everywhere is
//! command-line flag > config entry > built-in default.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::fail::{CliError, CliResult};

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "config {} line {}: expected KEY=VALUE",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_owned(), value.trim().to_owned());
        }
        Ok(Config { values })
    }

    /// Resolve an option: the flag if given, else the config entry, else
    /// the default.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw.parse().map_err(|e| {
                CliError::usage(format!("config key {key}: cannot parse {raw:?}: {e}"))
            }),
            None => Ok(default),
        }
    }
}

/// Comma-separated list parser for grid flags.
pub fn parse_list<T>(raw: &str, what: &str) -> CliResult<Vec<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| CliError::usage(format!("bad {what} entry {s:?}: {e}")))
        })
        .collect()
}
