//! Flag values from an optional TOML file. Flags given on the command line win.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::{io_err, CliError, CliResult};

#[derive(Debug, Clone, Default)]
pub struct Settings {
    table: toml::Table,
}

/// The table for one command.
#[derive(Debug, Clone, Default)]
pub struct Section {
    table: toml::Table,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        Ok(Self { table })
    }

    pub fn section(&self, name: &str) -> Section {
        match self.table.get(name) {
            Some(toml::Value::Table(t)) => Section { table: t.clone() },
            _ => Section::default(),
        }
    }
}

impl Section {
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> CliResult<Option<T>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => v
                .clone()
                .try_into()
                .map(Some)
                .map_err(|e| CliError::usage(format!("config key `{key}`: {e}"))),
        }
    }

    /// The flag value, else the config value.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn or<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    pub fn require<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        self.pick(flag, key)?
            .ok_or_else(|| CliError::usage(format!("missing required --{}", key.replace('_', "-"))))
    }

    /// A list flag; the config may give an array or a comma-separated string.
    pub fn list(&self, flag: Vec<String>, key: &str) -> CliResult<Option<Vec<String>>> {
        if !flag.is_empty() {
            return Ok(Some(flag));
        }
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.split(',').map(|t| t.trim().to_string()).collect())),
            Some(_) => self.get(key),
        }
    }

    /// Numbers in the config may be written as strings ("full") or integers.
    pub fn string_or_int(&self, flag: Option<String>, key: &str) -> CliResult<Option<String>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) => Ok(Some(i.to_string())),
            Some(_) => self.get(key),
        }
    }
}
