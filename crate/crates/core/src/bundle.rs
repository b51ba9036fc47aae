use crate::error::{ensure_finite, ensure_len, Error, Result};
use crate::spline::{CplSpline, PiecewiseForm};

/// The units of one layer written as splines over a shared knot vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineBundle {
    knots: Vec<f64>,
    q1s: Vec<f64>,
    q0s: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl SplineBundle {
    pub fn new(knots: Vec<f64>, q1s: Vec<f64>, q0s: Vec<f64>, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        ensure_finite("bundle knots", &knots)?;
        ensure_finite("bundle slopes", &q1s)?;
        ensure_finite("bundle intercepts", &q0s)?;
        ensure_len("bundle intercepts", q1s.len(), q0s.len())?;
        ensure_len("bundle coefficient rows", q1s.len(), coeffs.len())?;
        for row in &coeffs {
            ensure_finite("bundle coefficients", row)?;
            ensure_len("bundle coefficient columns", knots.len(), row.len())?;
        }
        if let Some(w) = knots.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpline(format!(
                "bundle knots must be strictly increasing, found {} followed by {}",
                w[0], w[1]
            )));
        }
        Ok(SplineBundle {
            knots,
            q1s,
            q0s,
            coeffs,
        })
    }

    pub(crate) fn from_parts_unchecked(
        knots: Vec<f64>,
        q1s: Vec<f64>,
        q0s: Vec<f64>,
        coeffs: Vec<Vec<f64>>,
    ) -> Self {
        SplineBundle {
            knots,
            q1s,
            q0s,
            coeffs,
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn q1s(&self) -> &[f64] {
        &self.q1s
    }

    pub fn q0s(&self) -> &[f64] {
        &self.q0s
    }

    /// One row per unit, one column per knot.
    pub fn coeff_matrix(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn width(&self) -> usize {
        self.q1s.len()
    }

    /// Unit `j` as a spline over the full shared knot vector (zero coefficients kept).
    pub fn unit(&self, j: usize) -> CplSpline {
        CplSpline::new(self.q1s[j], self.q0s[j], self.knots.clone(), self.coeffs[j].clone())
            .expect("bundle rows are valid splines")
    }

    pub fn piecewise(&self, j: usize) -> PiecewiseForm {
        PiecewiseForm::from_terms(self.q1s[j], self.q0s[j], &self.knots, &self.coeffs[j])
    }

    /// True when no column is all zero at tolerance `zero`.
    pub fn is_canonical(&self, zero: f64) -> bool {
        (0..self.knots.len()).all(|k| self.coeffs.iter().any(|row| row[k].abs() > zero))
    }
}
