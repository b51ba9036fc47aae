use crate::error::{Error, Result};

/// Numerical thresholds shared by every routine in the crate.
///
/// All three are absolute except `eval`, which is applied to errors already
/// normalized by `1 + |f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Coefficients (and slopes) with magnitude at or below this count as zero.
    pub zero: f64,
    /// Knots closer than this are merged into one.
    pub merge: f64,
    /// Acceptance threshold for oracle comparisons.
    pub eval: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: 1e-10,
            merge: 1e-12,
            eval: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(zero: f64, merge: f64, eval: f64) -> Result<Self> {
        let tol = Tolerances { zero, merge, eval };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("zero", self.zero), ("merge", self.merge), ("eval", self.eval)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerances(format!(
                    "{name} tolerance must be finite and positive, got {v}"
                )));
            }
        }
        if self.merge > self.zero {
            return Err(Error::InvalidTolerances(format!(
                "merge tolerance {} exceeds zero tolerance {}",
                self.merge, self.zero
            )));
        }
        Ok(())
    }

    pub(crate) fn is_zero(&self, v: f64) -> bool {
        v.abs() <= self.zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Tolerances::new(0.0, 1e-12, 1e-8).is_err());
        assert!(Tolerances::new(1e-10, -1.0, 1e-8).is_err());
        assert!(Tolerances::new(1e-10, 1e-12, f64::NAN).is_err());
        assert!(Tolerances::new(1e-12, 1e-10, 1e-8).is_err());
    }
}
