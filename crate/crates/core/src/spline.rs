//! Continuous piecewise-linear splines in truncated-power form
//! `q1 t + q0 + Σ α_k σ(t - x_k)` and their per-interval linear data.

use std::cmp::Ordering;

use crate::error::{ensure_finite, ensure_len, Error, Result};
use crate::tol::Tolerances;

#[inline]
pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// A continuous piecewise-linear function with finite, strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CplSpline {
    q1: f64,
    q0: f64,
    knots: Vec<f64>,
    coeffs: Vec<f64>,
}

impl CplSpline {
    /// Builds a spline from already ordered data. Knots must be finite and
    /// strictly increasing; coefficients may be zero.
    pub fn new(q1: f64, q0: f64, knots: Vec<f64>, coeffs: Vec<f64>) -> Result<Self> {
        ensure_finite("spline linear part", &[q1, q0])?;
        ensure_finite("spline knots", &knots)?;
        ensure_finite("spline coefficients", &coeffs)?;
        ensure_len("spline coefficients", knots.len(), coeffs.len())?;
        if let Some(w) = knots.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpline(format!(
                "knots must be strictly increasing, found {} followed by {}",
                w[0], w[1]
            )));
        }
        Ok(CplSpline {
            q1,
            q0,
            knots,
            coeffs,
        })
    }

    pub fn linear(q1: f64, q0: f64) -> Self {
        CplSpline {
            q1,
            q0,
            knots: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    /// Builds the canonical spline from arbitrary terms: knots are sorted,
    /// knots within `tol.merge` of the previous kept knot are merged by summing
    /// their coefficients, and coefficients with `|α| <= tol.zero` are dropped.
    pub fn canonical(
        q1: f64,
        q0: f64,
        knots: Vec<f64>,
        coeffs: Vec<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        ensure_finite("spline linear part", &[q1, q0])?;
        ensure_finite("spline knots", &knots)?;
        ensure_finite("spline coefficients", &coeffs)?;
        ensure_len("spline coefficients", knots.len(), coeffs.len())?;
        let (knots, coeffs) = merge_terms(knots.into_iter().zip(coeffs).collect(), tol);
        Ok(CplSpline {
            q1,
            q0,
            knots,
            coeffs,
        })
    }

    pub fn canonicalize(&self, tol: &Tolerances) -> Self {
        let terms = self.knots.iter().copied().zip(self.coeffs.iter().copied()).collect();
        let (knots, coeffs) = merge_terms(terms, tol);
        CplSpline {
            q1: self.q1,
            q0: self.q0,
            knots,
            coeffs,
        }
    }

    pub fn is_canonical(&self, tol: &Tolerances) -> bool {
        self.coeffs.iter().all(|a| a.abs() > tol.zero)
            && self.knots.windows(2).all(|w| w[1] - w[0] > tol.merge)
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// `q1 t + q0 + Σ α_k σ(t - x_k)` without input checks.
    pub fn value(&self, t: f64) -> f64 {
        self.knots
            .iter()
            .zip(&self.coeffs)
            .fold(self.q1 * t + self.q0, |acc, (&x, &a)| acc + a * relu(t - x))
    }

    pub fn piecewise(&self) -> PiecewiseForm {
        PiecewiseForm::from_terms(self.q1, self.q0, &self.knots, &self.coeffs)
    }

    /// Returns a copy with `q0` replaced, used to build deliberate mismatches.
    pub fn with_offset(&self, delta: f64) -> Self {
        CplSpline {
            q0: self.q0 + delta,
            ..self.clone()
        }
    }
}

fn merge_terms(mut terms: Vec<(f64, f64)>, tol: &Tolerances) -> (Vec<f64>, Vec<f64>) {
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
    for (x, a) in terms {
        match merged.last_mut() {
            Some(last) if x - last.0 <= tol.merge => last.1 += a,
            _ => merged.push((x, a)),
        }
    }
    merged
        .into_iter()
        .filter(|(_, a)| a.abs() > tol.zero)
        .unzip()
}

/// Per-interval slopes and intercepts of a spline.
///
/// Interval `ν` is `(x_ν, x_{ν+1})` with `x_0 = -∞` and `x_{N+1} = +∞`, so
/// `mu` and `eta` both have one more entry than `knots`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseForm {
    pub knots: Vec<f64>,
    pub mu: Vec<f64>,
    pub eta: Vec<f64>,
}

impl PiecewiseForm {
    pub fn from_terms(q1: f64, q0: f64, knots: &[f64], coeffs: &[f64]) -> Self {
        let mut mu = Vec::with_capacity(knots.len() + 1);
        let mut eta = Vec::with_capacity(knots.len() + 1);
        mu.push(q1);
        eta.push(q0);
        for (&x, &a) in knots.iter().zip(coeffs) {
            let (m, e) = (mu[mu.len() - 1], eta[eta.len() - 1]);
            mu.push(m + a);
            eta.push(e - a * x);
        }
        PiecewiseForm {
            knots: knots.to_vec(),
            mu,
            eta,
        }
    }

    /// Recovers the truncated-power coefficients `α_k = μ_k - μ_{k-1}`.
    pub fn coeffs(&self) -> Vec<f64> {
        self.mu.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn to_spline(&self) -> Result<CplSpline> {
        CplSpline::new(self.mu[0], self.eta[0], self.knots.clone(), self.coeffs())
    }

    /// Value at knot `k` (0-based) taken from the piece on its left.
    pub fn value_at_knot(&self, k: usize) -> f64 {
        self.mu[k] * self.knots[k] + self.eta[k]
    }

    /// Index of the interval containing `t`; a knot belongs to the interval on its right.
    pub fn interval_of(&self, t: f64) -> usize {
        self.knots
            .partition_point(|&x| x.partial_cmp(&t) != Some(Ordering::Greater))
    }

    pub fn value(&self, t: f64) -> f64 {
        let nu = self.interval_of(t);
        self.mu[nu] * t + self.eta[nu]
    }

    /// Largest continuity defect `|μ_{k-1} x_k + η_{k-1} - (μ_k x_k + η_k)|` over all knots.
    pub fn continuity_defect(&self) -> f64 {
        self.knots
            .iter()
            .enumerate()
            .map(|(k, &x)| ((self.mu[k] * x + self.eta[k]) - (self.mu[k + 1] * x + self.eta[k + 1])).abs())
            .fold(0.0, f64::max)
    }
}
