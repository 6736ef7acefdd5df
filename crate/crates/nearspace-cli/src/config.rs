//! Optional plain-text configuration file, `key = value` per line.
//!
//! The file named by `NEARSPACE_CONFIG` supplies defaults; command-line
//! flags always win. Unknown keys are rejected so typos surface instead
//! of silently falling back.

use std::collections::BTreeMap;

pub const ENV_VAR: &str = "NEARSPACE_CONFIG";

const KNOWN_KEYS: &[&str] = &[
    "format", "jobs", "seed", "samples", "enum_cap", "budget", "fixtures",
];

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    /// Loads the file pointed to by `NEARSPACE_CONFIG`, if set.
    pub fn from_env() -> Result<FileConfig, String> {
        match std::env::var(ENV_VAR) {
            Ok(path) if !path.is_empty() => FileConfig::from_path(&path),
            _ => Ok(FileConfig::default()),
        }
    }

    pub fn from_path(path: &str) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {path}: {e}"))?;
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config {path}:{}: expected `key = value`, got `{line}`",
                    lineno + 1
                ));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(format!(
                    "config {path}:{}: unknown key `{key}` (known: {})",
                    lineno + 1,
                    KNOWN_KEYS.join(", ")
                ));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn str_value(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn u64_value(&self, key: &str) -> Result<Option<u64>, String> {
        self.values
            .get(key)
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| format!("config key `{key}`: `{s}` is not a nonnegative integer"))
            })
            .transpose()
    }
}
