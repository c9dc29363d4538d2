use serde::Serialize;

use super::Expr;
use crate::numeval::{numeric_residual, NumericConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroVerdict {
    Zero,
    Nonzero,
    Inconclusive,
}

/// Zero test: exact when the canonical form vanishes, otherwise decided by
/// seeded sampling; a symbolic nonzero that samples to zero is inconclusive.
pub fn is_zero(e: &Expr) -> ZeroVerdict {
    is_zero_with(e, &NumericConfig::default())
}

pub fn is_zero_with(e: &Expr, cfg: &NumericConfig) -> ZeroVerdict {
    if e.is_zero() {
        return ZeroVerdict::Zero;
    }
    match numeric_residual(e, cfg) {
        Ok(r) if r > cfg.tol => ZeroVerdict::Nonzero,
        _ => ZeroVerdict::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Elementary;

    #[test]
    fn verdicts() {
        let ut = Expr::u("u", &["t"]);
        assert_eq!(is_zero(&(&ut - &ut)), ZeroVerdict::Zero);
        assert_eq!(is_zero(&Expr::u("u", &["x"])), ZeroVerdict::Nonzero);
        let u = Expr::u("u", &[]);
        let s = Expr::elem(Elementary::Sin, u.clone()).pow(2).unwrap();
        let c = Expr::elem(Elementary::Cos, u).pow(2).unwrap();
        let e = s + c - Expr::one();
        assert!(!e.is_zero());
        assert_eq!(is_zero(&e), ZeroVerdict::Inconclusive);
    }
}
