//! `qnoether.conf`: `key = value` lines read from the system file's directory.

use std::path::Path;

use crate::error::{Error, Result};
use crate::numeval::NumericConfig;

pub const CONFIG_FILE: &str = "qnoether.conf";

/// Settings from a config file; unset keys keep their defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub range: Option<(f64, f64)>,
    pub trials: Option<usize>,
    pub expansion_cap: Option<u32>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Settings::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: k + 1, col: 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected key = value, found {line}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("{key}: not a number: {v}")));
            match key {
                "seed" => out.seed = Some(value.parse().map_err(|_| bad(format!("seed: not an integer: {value}")))?),
                "tol" => out.tol = Some(num(value)?),
                "trials" => {
                    out.trials = Some(value.parse().map_err(|_| bad(format!("trials: not an integer: {value}")))?)
                }
                "range" => {
                    let (a, b) = value
                        .trim_matches(|c| c == '[' || c == ']')
                        .split_once(',')
                        .ok_or_else(|| bad(format!("range: expected lo, hi, found {value}")))?;
                    let (a, b) = (num(a.trim())?, num(b.trim())?);
                    if !(a < b) {
                        return Err(bad(format!("range: empty interval {value}")));
                    }
                    out.range = Some((a, b));
                }
                "expansion-power-cap" => {
                    out.expansion_cap =
                        Some(value.parse().map_err(|_| bad(format!("expansion-power-cap: not an integer: {value}")))?)
                }
                _ => return Err(bad(format!("unknown setting {key}"))),
            }
        }
        Ok(out)
    }

    /// Reads the config file next to `system`, if there is one.
    pub fn beside(system: &Path) -> Result<Self> {
        let dir = system.parent().unwrap_or(Path::new("."));
        let path = dir.join(CONFIG_FILE);
        match std::fs::read_to_string(&path) {
            Ok(text) => Settings::parse(&text).map_err(|e| match e {
                Error::Parse { line, col, msg } => {
                    Error::Parse { line, col, msg: format!("{}: {msg}", path.display()) }
                }
                other => other,
            }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Settings::default()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn apply(&self, cfg: &mut NumericConfig) {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(r) = self.range {
            cfg.range = r;
        }
        if let Some(n) = self.trials {
            cfg.trials = n;
        }
        if let Some(c) = self.expansion_cap {
            crate::expr::set_expansion_cap(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_settings() {
        let s = Settings::parse("seed = 7\n# note\ntol=1e-10\nrange = [0.25, 2]\nexpansion-power-cap = 12\n").unwrap();
        assert_eq!(s.seed, Some(7));
        assert_eq!(s.tol, Some(1e-10));
        assert_eq!(s.range, Some((0.25, 2.0)));
        assert_eq!(s.expansion_cap, Some(12));
    }

    #[test]
    fn rejects_unknown_keys_with_line() {
        match Settings::parse("seed = 1\ncolour = red") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(Settings::parse("range = 2, 1").is_err());
    }

    #[test]
    fn missing_file_means_defaults() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(Settings::beside(&dir.path().join("x.sys")).unwrap(), Settings::default());
        std::fs::write(dir.path().join(CONFIG_FILE), "seed = 9").unwrap();
        assert_eq!(Settings::beside(&dir.path().join("x.sys")).unwrap().seed, Some(9));
    }
}
