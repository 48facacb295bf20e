use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// `key = value` text file; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyValueFile {
    path: PathBuf,
    entries: Vec<(String, String, usize)>,
}

impl KeyValueFile {
    pub fn parse(text: &str, path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::parse(&path, i + 1, format!("expected `key = value`, got `{line}`")));
            };
            let key = k.trim();
            if key.is_empty() {
                return Err(Error::parse(&path, i + 1, "empty key"));
            }
            entries.push((key.to_string(), v.trim().to_string(), i + 1));
        }
        Ok(Self { path, entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _, _)| k.as_str())
    }

    /// Last value for `key`, parsed.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.iter().rev().find(|(k, _, _)| k == key) {
            None => Ok(None),
            Some((_, v, line)) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::parse(&self.path, *line, format!("bad value for `{key}`: {e}"))),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }
}
