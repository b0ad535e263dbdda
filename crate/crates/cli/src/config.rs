use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Plain `key = value` lines; `#` starts a comment.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

const KNOWN: [&str; 14] = [
    "n",
    "n0",
    "prob",
    "instances",
    "perms",
    "beta",
    "p",
    "dt",
    "max-iters",
    "shots",
    "seed",
    "threads",
    "exact-inner",
    "out",
];

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {}: expected key=value", i + 1);
            };
            let key = k.trim().replace('_', "-");
            if !KNOWN.contains(&key.as_str()) {
                bail!("config line {}: unknown key `{}`", i + 1, k.trim());
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = FileConfig::parse("# demo\nn = 12\nmax_iters=30 # trailing\n\nexact-inner = true\n").unwrap();
        assert_eq!(c.get::<usize>("n").unwrap(), Some(12));
        assert_eq!(c.get::<usize>("max-iters").unwrap(), Some(30));
        assert_eq!(c.get::<bool>("exact-inner").unwrap(), Some(true));
        assert_eq!(c.get::<usize>("n0").unwrap(), None);
        assert!(FileConfig::parse("bogus = 1").is_err());
        assert!(FileConfig::parse("n 12").is_err());
        assert!(FileConfig::parse("n = x").unwrap().get::<usize>("n").is_err());
    }
}
