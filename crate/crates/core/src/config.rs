//! Plain `key = value` parameter files for the CLI.
//!
//! ```text
//! # equal cross gains, equal powers
//! a = 0.9
//! b = 0.9
//! p1 = 10
//! p2 = 10
//! c-min = 1
//! c-max = 3
//! step = 0.05
//! ```
//!
//! Blank lines and `#` comments are ignored. Keys may use `-` or `_`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

pub const KNOWN_KEYS: &[&str] = &["a", "b", "p1", "p2", "c1", "c2", "c_min", "c_max", "step", "tol"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigValues {
    values: BTreeMap<String, f64>,
}

impl ConfigValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::ConfigFile {
                line,
                reason: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::ConfigFile {
                    line,
                    reason: format!("unknown key `{key}`"),
                });
            }
            let value: f64 = value.trim().parse().map_err(|_| Error::ConfigFile {
                line,
                reason: format!("`{}` is not a number", value.trim()),
            })?;
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::ConfigFile {
                    line,
                    reason: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(ConfigValues { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(&key.replace('-', "_")).copied()
    }

    /// Command-line value if given, else the file value.
    pub fn resolve(&self, key: &str, flag: Option<f64>) -> Option<f64> {
        flag.or_else(|| self.get(key))
    }
}
