//! `key = value` configuration file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub const CACHE_ENV: &str = "VSC_CACHE_DIR";
pub const DEFAULT_FILE: &str = "vsc.conf";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub threads: Option<usize>,
    pub radii_retries: Option<u32>,
    pub dmax: Option<String>,
    pub jmax: Option<u32>,
    pub cache_dir: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Config::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value", no + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let num = |what: &str| format!("line {}: {what} must be a non-negative integer", no + 1);
            match key {
                "threads" => c.threads = Some(value.parse().with_context(|| num("threads"))?),
                "radii_retries" => c.radii_retries = Some(value.parse().with_context(|| num("radii_retries"))?),
                "dmax" => c.dmax = Some(value.to_string()),
                "jmax" => c.jmax = Some(value.parse().with_context(|| num("jmax"))?),
                "cache_dir" => c.cache_dir = Some(PathBuf::from(value)),
                other => bail!("line {}: unknown key `{other}`", no + 1),
            }
        }
        Ok(c)
    }

    /// Reads `path`, or `vsc.conf` in the working directory when present.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None if Path::new(DEFAULT_FILE).exists() => PathBuf::from(DEFAULT_FILE),
            None => return Ok(Config::default()),
        };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Command-line values win over the environment, which wins over the file.
    pub fn cache_dir(&self, flag: Option<&Path>) -> Option<PathBuf> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .or_else(|| self.cache_dir.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let c = Config::parse("threads = 4\n# comment\nradii_retries=3\ndmax = 5/2\njmax=3\ncache_dir = /tmp/x # trailing\n")
            .unwrap();
        assert_eq!(c.threads, Some(4));
        assert_eq!(c.radii_retries, Some(3));
        assert_eq!(c.dmax.as_deref(), Some("5/2"));
        assert_eq!(c.jmax, Some(3));
        assert_eq!(c.cache_dir, Some(PathBuf::from("/tmp/x")));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("threads").is_err());
        assert!(Config::parse("threads = many").is_err());
    }
}
