//! Flat key-value config files with `[section]` headers. Keys collect into a
//! single map; later duplicates win, comments start with `#`.

use crate::{CliError, CliResult};
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Config::parse(&text).map_err(|(line, msg)| {
            CliError::Validation(format!("{}:{line}: {msg}", path.display()))
        })
    }

    pub fn parse(text: &str) -> Result<Config, (usize, String)> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err((idx + 1, "unterminated section header".into()));
                }
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    values.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => return Err((idx + 1, format!("expected 'key = value', got '{line}'"))),
            }
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn parse_key<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Validation(format!("config key '{key}': bad value '{v}'"))),
        }
    }

    pub fn parse_list<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<Vec<T>>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse_comma_list(v)
                .map(Some)
                .map_err(|item| CliError::Validation(format!("config key '{key}': bad item '{item}'"))),
        }
    }
}

pub fn parse_comma_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| s.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let cfg = Config::parse("[sweep]\nlattice = cubic # note\ntrials = 100\n").unwrap();
        assert_eq!(cfg.get("lattice"), Some("cubic"));
        assert_eq!(cfg.parse_key::<u64>("trials").unwrap(), Some(100));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("what is this\n").is_err());
    }

    #[test]
    fn comma_lists() {
        let v: Vec<f64> = parse_comma_list("0.1, 0.2,0.3").unwrap();
        assert_eq!(v.len(), 3);
    }
}
