use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::numeval::{numeric_residual_all, NumericConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "verified" => Ok(Verdict::Verified),
            "refuted" => Ok(Verdict::Refuted),
            "inconclusive" => Ok(Verdict::Inconclusive),
            _ => Err(format!("unknown verdict {s}")),
        }
    }
}

/// Whether a numerically vanishing residual may count as verified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    #[default]
    Exact,
    Numeric,
}

impl std::str::FromStr for VerifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(VerifyMode::Exact),
            "numeric" => Ok(VerifyMode::Numeric),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckConfig {
    pub mode: VerifyMode,
    pub numeric: NumericConfig,
}

impl CheckConfig {
    pub fn numeric(trials: usize) -> Self {
        CheckConfig {
            mode: VerifyMode::Numeric,
            numeric: NumericConfig { trials, ..NumericConfig::default() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub symbolic_terms: usize,
    pub numeric_max: Option<f64>,
}

/// Outcome of one check. Serializes to the JSON report schema; the residual
/// expressions and notes stay in memory only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub verdict: Verdict,
    pub residual: ResidualSummary,
    pub seed: u64,
    pub time_ms: u64,
    #[serde(skip)]
    pub residuals: Vec<Expr>,
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Builds a report by judging the residuals.
    pub fn from_residuals(
        check: &str,
        subject: String,
        residuals: Vec<Expr>,
        cfg: &CheckConfig,
        started: Instant,
    ) -> CheckReport {
        let (verdict, residual, notes) = judge(&residuals, cfg);
        CheckReport {
            check: check.to_string(),
            subject,
            verdict,
            residual,
            seed: cfg.numeric.seed,
            time_ms: started.elapsed().as_millis() as u64,
            residuals,
            notes,
        }
    }

    pub fn with_verdict(mut self, v: Verdict, note: impl Into<String>) -> Self {
        self.verdict = v;
        self.notes.push(note.into());
        self
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.check, self.subject, self.verdict)?;
        if self.residual.symbolic_terms > 0 {
            write!(f, " ({} residual terms", self.residual.symbolic_terms)?;
            if let Some(m) = self.residual.numeric_max {
                write!(f, ", numeric max {m:.3e}")?;
            }
            write!(f, ")")?;
        }
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

/// Verdict for a list of residuals that should all vanish. Exact zero is
/// verified; a numerically large residual is refuted; a residual that is
/// numerically zero but not symbolically zero is inconclusive, or verified
/// in numeric mode.
pub fn judge(residuals: &[Expr], cfg: &CheckConfig) -> (Verdict, ResidualSummary, Vec<String>) {
    let terms: usize = residuals.iter().map(Expr::term_count).sum();
    if terms == 0 {
        return (Verdict::Verified, ResidualSummary { symbolic_terms: 0, numeric_max: None }, Vec::new());
    }
    match numeric_residual_all(residuals, &cfg.numeric) {
        Ok(m) => {
            let summary = ResidualSummary { symbolic_terms: terms, numeric_max: Some(m) };
            if m > cfg.numeric.tol {
                (Verdict::Refuted, summary, Vec::new())
            } else if cfg.mode == VerifyMode::Numeric {
                let note = format!("numeric verification, tol {:e}", cfg.numeric.tol);
                (Verdict::Verified, summary, vec![note])
            } else {
                (Verdict::Inconclusive, summary, vec!["numerically zero, not symbolically".into()])
            }
        }
        Err(e) => (
            Verdict::Inconclusive,
            ResidualSummary { symbolic_terms: terms, numeric_max: None },
            vec![format!("numeric evaluation failed: {e}")],
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_follow_residuals() {
        let cfg = CheckConfig::default();
        assert_eq!(judge(&[Expr::zero()], &cfg).0, Verdict::Verified);
        assert_eq!(judge(&[Expr::u("u", &["x"])], &cfg).0, Verdict::Refuted);
        let u = Expr::u("u", &[]);
        let trig = Expr::elem(crate::expr::Elementary::Sin, u.clone()).pow(2).unwrap()
            + Expr::elem(crate::expr::Elementary::Cos, u).pow(2).unwrap()
            - Expr::one();
        assert_eq!(judge(&[trig.clone()], &cfg).0, Verdict::Inconclusive);
        assert_eq!(judge(&[trig], &CheckConfig::numeric(50)).0, Verdict::Verified);
    }

    #[test]
    fn json_schema_fields() {
        let r = CheckReport::from_residuals("cosymmetry", "beta = (1)".into(), vec![], &CheckConfig::default(), Instant::now());
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 6);
        assert_eq!(v["verdict"], "verified");
        assert!(v["residual"]["numeric_max"].is_null());
    }
}
