//! `key=value` configuration files. A config file may pre-set any flag of
//! the invoked subcommand; explicit command-line flags win. Keys that match
//! no flag of the subcommand are rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::errors::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!(
                    "config line {} is not key=value: '{raw}'",
                    idx + 1
                ))
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Fills `slot` from the config when the command line left it unset.
    pub fn fill<T: FromStr>(&mut self, key: &str, slot: &mut Option<T>) -> CliResult<()>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(raw) = self.entries.remove(key) {
            if slot.is_none() {
                let parsed = raw.parse::<T>().map_err(|e| {
                    CliError::Validation(format!("config key '{key}': cannot parse '{raw}': {e}"))
                })?;
                *slot = Some(parsed);
            }
        }
        Ok(())
    }

    /// Errors on any key not consumed by the invoked subcommand.
    pub fn finish(self) -> CliResult<()> {
        if let Some(key) = self.entries.keys().next() {
            return Err(CliError::Validation(format!(
                "config key '{key}' does not match any flag of this subcommand"
            )));
        }
        Ok(())
    }
}
