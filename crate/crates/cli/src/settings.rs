//! `key=value` configuration files. Values only fill options that were not
//! given on the command line.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Clone)]
pub struct Settings {
    entries: BTreeMap<String, String>,
    source: Option<PathBuf>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_").to_ascii_lowercase()
}

impl Settings {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, Some(path.to_path_buf()))
    }

    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, source: Option<PathBuf>) -> CliResult<Self> {
        let origin = source
            .as_deref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "config".into());
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("{origin}:{}: expected key=value, got {line:?}", idx + 1))
            })?;
            let key = normalize(key);
            if key.is_empty() {
                return Err(CliError::usage(format!("{origin}:{}: empty key", idx + 1)));
            }
            entries.insert(key, value.trim().to_owned());
        }
        Ok(Self { entries, source })
    }

    pub fn get<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some(raw) = self.entries.get(&normalize(key)) else {
            return Ok(None);
        };
        raw.parse().map(Some).map_err(|e| {
            let origin = self
                .source
                .as_deref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "config".into());
            CliError::usage(format!("{origin}: invalid value {raw:?} for {key}: {e}"))
        })
    }

    /// The command-line value when present, else the configured one.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
