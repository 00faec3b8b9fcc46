use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `key=value` settings, one per line; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got {raw:?}", i + 1)))?;
            // flags spell keys with dashes; accept underscores too
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("bad value {v:?} for {key}")))
            })
            .transpose()
    }

    /// The flag value if given, else the file value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// Like [`resolve`](Self::resolve) without a default.
    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// A switch is on when the flag is present or the file sets it to true.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("# survey\nN = 500\nA=4\nseed=9 # fixed\nlenient_tail=true\n").unwrap();
        assert_eq!(file.resolve(None, "N", 10u64).unwrap(), 500);
        assert_eq!(file.resolve(Some(7u64), "N", 10).unwrap(), 7);
        assert_eq!(file.resolve(None, "r", 4usize).unwrap(), 4);
        assert_eq!(file.resolve_opt::<u64>(None, "seed").unwrap(), Some(9));
        assert!(file.switch(false, "lenient-tail").unwrap());
        assert!(!file.switch(false, "trace").unwrap());
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(ConfigFile::parse("N 500").is_err());
        let file = ConfigFile::parse("N=lots").unwrap();
        assert!(file.get::<u64>("N").is_err());
    }
}
