//! `key = value` defaults file. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use wml_core::Error;

const KEYS: &[&str] = &[
    "rank",
    "genus_cap",
    "orbit_cap",
    "vertex_cap",
    "spec_cap",
    "max_subdivision",
    "term_cap",
    "depth",
    "samples",
    "seed",
    "cache_dir",
];

#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, Error> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("config line {}: expected key = value", i + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Invalid(format!("config line {}: unknown key {k:?}", i + 1)));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Error> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Invalid(format!("config key {key}: cannot parse {v:?}"))),
        }
    }

    /// `flag`, else the config value, else `default`.
    pub fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, Error> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.values.get("cache_dir").map(PathBuf::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let c = Config::parse("# batch defaults\nrank = 3\ngenus_cap=2  # small\n\n").unwrap();
        assert_eq!(c.get::<usize>("rank").unwrap(), Some(3));
        assert_eq!(c.pick(None, "genus_cap", 3usize).unwrap(), 2);
        assert_eq!(c.pick(Some(5), "genus_cap", 3usize).unwrap(), 5);
        assert_eq!(c.pick(None, "seed", 9u64).unwrap(), 9);
    }

    #[test]
    fn rejects_unknown_keys_and_junk() {
        assert!(Config::parse("colour = blue").is_err());
        assert!(Config::parse("rank 3").is_err());
        let c = Config::parse("rank = three").unwrap();
        assert!(c.get::<usize>("rank").is_err());
    }
}
