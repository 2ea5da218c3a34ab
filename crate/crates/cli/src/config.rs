//! `key = value` settings file named by `OSCISHELL_CONFIG`. Flags override it,
//! and it overrides built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

pub const ENV_VAR: &str = "OSCISHELL_CONFIG";

pub const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "grid_n",
    "grid_L",
    "t_steps",
    "format",
    "window",
    "subdivisions",
    "panels",
    "abs_tol",
    "quad_L",
    "max_panels",
    "refine",
    "seed",
    "level",
];

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {}: expected key = value", n + 1);
            };
            let k = k.trim();
            if !KNOWN_KEYS.contains(&k) {
                bail!("config line {}: unknown key `{k}`", n + 1);
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// File named by the environment variable, or an empty config.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow::anyhow!("config key `{key}` = `{v}`: {e}"))
            })
            .transpose()
    }

    /// `flag`, else the file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let c = FileConfig::parse("grid_n = 240\n# comment\nformat=json  # trailing\n").unwrap();
        assert_eq!(c.pick(None, "grid_n", 180usize).unwrap(), 240);
        assert_eq!(c.pick(Some(90usize), "grid_n", 180).unwrap(), 90);
        assert_eq!(c.pick(None, "t_steps", 61usize).unwrap(), 61);
        assert_eq!(c.pick(None, "format", String::from("csv")).unwrap(), "json");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(FileConfig::parse("grid_n 240").is_err());
        assert!(FileConfig::parse("colour = red").is_err());
        let c = FileConfig::parse("grid_n = many").unwrap();
        assert!(c.get::<usize>("grid_n").is_err());
    }
}
