//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! instance = fixtures/standard_3mr.net
//! out = results
//! seed = 7
//! budget = 10000
//! immigrant_fraction = 0.3
//! ```
//!
//! Every [`RunParams`] field is a key, plus `instance` and `out`. Relative
//! paths in a file resolve against the file's directory.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use survroute::RunParams;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("`{key}`: cannot parse `{value}`")]
    InvalidValue { key: String, value: String },
    #[error("override `{0}` is not of the form key=value")]
    BadOverride(String),
    #[error("no {0} given")]
    Missing(&'static str),
}

pub const KEYS: &[&str] = &[
    "instance",
    "out",
    "seed",
    "budget",
    "population_size",
    "offspring_count",
    "archive_capacity",
    "stagnation_window",
    "stagnation_tolerance",
    "immigrant_fraction",
    "scheduler_window",
    "scheduler_floor",
    "ls_moves",
    "mutation_probability",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub instance: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub params: RunParams,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl RunConfig {
    /// Parses config text; `base` is the directory relative paths are
    /// resolved against.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = RunConfig::default();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            config.set(key, value)?;
            if let (Some(base), "instance" | "out") = (base, key) {
                let slot = if key == "instance" {
                    &mut config.instance
                } else {
                    &mut config.out
                };
                if let Some(p) = slot.as_mut().filter(|p| p.is_relative()) {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, item: &str) -> Result<(), ConfigError> {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::BadOverride(item.to_string()))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line: 0,
                key: key.to_string(),
            });
        }
        self.set(key, value.trim())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let p = &mut self.params;
        match key {
            "instance" => self.instance = Some(PathBuf::from(value)),
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => p.seed = parse_value(key, value)?,
            "budget" => p.budget = parse_value(key, value)?,
            "population_size" => p.population_size = parse_value(key, value)?,
            "offspring_count" => p.offspring_count = parse_value(key, value)?,
            "archive_capacity" => p.archive_capacity = parse_value(key, value)?,
            "stagnation_window" => p.stagnation_window = parse_value(key, value)?,
            "stagnation_tolerance" => p.stagnation_tolerance = parse_value(key, value)?,
            "immigrant_fraction" => p.immigrant_fraction = parse_value(key, value)?,
            "scheduler_window" => p.scheduler_window = parse_value(key, value)?,
            "scheduler_floor" => p.scheduler_floor = parse_value(key, value)?,
            "ls_moves" => p.ls_moves = parse_value(key, value)?,
            "mutation_probability" => p.mutation_probability = parse_value(key, value)?,
            _ => unreachable!("key list checked by callers"),
        }
        Ok(())
    }
}
