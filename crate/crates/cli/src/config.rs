//! Flat `key = value` configuration files and flag resolution.
//!
//! Every parameter of a command is looked up in three places, in order: the
//! command-line flag, the configuration file, the built-in default. The
//! resolved values are recorded so that the run manifest echoes exactly
//! what was used.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Parsed configuration file plus the record of resolved parameters.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// ignored, and a repeated key is an error.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::validation(format!("config line {}: expected key = value, got `{raw}`", no + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::validation(format!("config line {}: empty key", no + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::validation(format!(
                "config line {}: duplicate key `{k}`",
                no + 1
            )));
        }
    }
    Ok(out)
}

impl Settings {
    pub fn from_file(path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", p.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Self {
            file,
            ..Self::default()
        })
    }

    #[cfg(test)]
    pub fn from_map(file: BTreeMap<String, String>) -> Self {
        Self {
            file,
            ..Self::default()
        }
    }

    fn lookup<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        self.used.insert(key.to_string());
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(text) => Some(
                    text.parse::<T>()
                        .map_err(|e| CliError::validation(format!("config key `{key}`: cannot parse `{text}`: {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// Flag, then file, then `default`.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + fmt::Display + Clone,
        T::Err: fmt::Display,
    {
        match self.lookup(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.resolved.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    /// Flag, then file; `None` when neither is given.
    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        self.lookup(key, flag)
    }

    /// Records a value that is not read from flags or the file.
    pub fn record(&mut self, key: &str, value: impl fmt::Display) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    /// Fails if the file contains keys the command never asked for.
    pub fn check_unused(&self) -> Result<(), CliError> {
        let unknown: Vec<&String> = self.file.keys().filter(|k| !self.used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::validation(format!("unknown config keys: {unknown:?}")))
        }
    }

    /// The resolved parameters in key order.
    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }
}

/// A comma-separated list of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Result<Vec<f64>, _> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
            .collect();
        let v = v?;
        if v.is_empty() {
            return Err("empty list".into());
        }
        Ok(FloatList(v))
    }
}

impl fmt::Display for FloatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A complex number written as `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub num_complex::Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let FloatList(v) = s.parse()?;
        match v.as_slice() {
            [re, im] => Ok(ComplexArg(num_complex::Complex64::new(*re, *im))),
            [re] => Ok(ComplexArg(num_complex::Complex64::new(*re, 0.0))),
            _ => Err(format!("expected `re,im`, got `{s}`")),
        }
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let m = parse_config("# header\n n = 1024 \n\nlength=40 # box\n").unwrap();
        assert_eq!(m.get("n").unwrap(), "1024");
        assert_eq!(m.get("length").unwrap(), "40");
        assert!(parse_config("n 1024").is_err());
        assert!(parse_config("n = 1\nn = 2").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let mut file = BTreeMap::new();
        file.insert("n".to_string(), "256".to_string());
        file.insert("dt".to_string(), "0.1".to_string());
        let mut s = Settings::from_map(file);
        assert_eq!(s.get("n", Some(512usize), 64).unwrap(), 512);
        assert_eq!(s.get("dt", None, 1.0).unwrap(), 0.1);
        assert_eq!(s.get("t_end", None, 2.0).unwrap(), 2.0);
        assert_eq!(s.resolved().get("n").unwrap(), "512");
        s.check_unused().unwrap();
        let mut file = BTreeMap::new();
        file.insert("bogus".to_string(), "1".to_string());
        assert!(Settings::from_map(file).check_unused().is_err());
    }

    #[test]
    fn list_and_complex_arguments() {
        assert_eq!("0.9, 0.99".parse::<FloatList>().unwrap().0, vec![0.9, 0.99]);
        assert!("".parse::<FloatList>().is_err());
        let c: ComplexArg = "0.5,-1".parse().unwrap();
        assert_eq!(c.0, num_complex::Complex64::new(0.5, -1.0));
        assert_eq!(c.to_string().parse::<ComplexArg>().unwrap(), c);
    }
}
