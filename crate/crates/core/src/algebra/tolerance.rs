use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds used throughout the matrix modules.
///
/// `rank_tol` is the singular-value cutoff for rank decisions, `eq_tol` bounds
/// structural identities (`p² = p`, `uu* = 1`) and `verify_tol` bounds sampled
/// acceptance residuals. They must satisfy `0 ≤ rank_tol ≤ eq_tol ≤ verify_tol`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eq_tol: f64,
    pub rank_tol: f64,
    pub verify_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eq_tol: 1e-9,
            rank_tol: 1e-10,
            verify_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(eq_tol: f64, rank_tol: f64, verify_tol: f64) -> Result<Self> {
        let tol = ToleranceConfig {
            eq_tol,
            rank_tol,
            verify_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.eq_tol, self.rank_tol, self.verify_tol];
        if all.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::domain("tolerances must be finite and nonnegative"));
        }
        if !(self.rank_tol <= self.eq_tol && self.eq_tol <= self.verify_tol) {
            return Err(Error::domain(format!(
                "tolerances must satisfy rank_tol ≤ eq_tol ≤ verify_tol (got {}, {}, {})",
                self.rank_tol, self.eq_tol, self.verify_tol
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_ordered() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_misordered_or_negative() {
        assert!(ToleranceConfig::new(1e-9, 1e-8, 1e-7).is_err());
        assert!(ToleranceConfig::new(1e-9, 1e-10, 1e-10).is_err());
        assert!(ToleranceConfig::new(-1.0, 0.0, 1.0).is_err());
        assert!(ToleranceConfig::new(0.0, 0.0, 0.0).is_ok());
    }
}
