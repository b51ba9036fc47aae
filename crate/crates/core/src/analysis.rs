use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_len, Error, Result};
use crate::hierarchy::KnotHierarchy;
use crate::network::{knot_bound, ReluNetwork};
use crate::spline::CplSpline;
use crate::tol::Tolerances;
use crate::transfer::dnn_to_spline;

/// `(knot, coefficient)` pairs with `|coefficient| > tol.zero`, sorted by knot.
pub fn active_knots(s: &CplSpline, tol: &Tolerances) -> Vec<(f64, f64)> {
    s.knots()
        .iter()
        .zip(s.coeffs())
        .filter(|(_, a)| a.abs() > tol.zero)
        .map(|(&x, &a)| (x, a))
        .collect()
}

/// Observed active knot count against `knot_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub observed: usize,
    pub bound: usize,
    pub ok: bool,
}

pub fn audit_bound(net: &ReluNetwork, tol: &Tolerances) -> Result<BoundReport> {
    let s = dnn_to_spline(net, tol)?;
    Ok(bound_report(&s, &net.widths(), tol))
}

pub fn bound_report(s: &CplSpline, widths: &[usize], tol: &Tolerances) -> BoundReport {
    let observed = active_knots(s, tol).len();
    let bound = knot_bound(widths);
    BoundReport {
        observed,
        bound,
        ok: observed <= bound,
    }
}

/// Prescribed knots with no active knot of `s` within `atol * (1 + |x|)`.
pub fn missing_knots(s: &CplSpline, prescribed: &[f64], atol: f64, tol: &Tolerances) -> Vec<f64> {
    let active: Vec<f64> = active_knots(s, tol).into_iter().map(|(x, _)| x).collect();
    prescribed
        .iter()
        .copied()
        .filter(|&x| {
            let i = active.partition_point(|&a| a < x);
            let near = |k: usize| active.get(k).is_some_and(|&a| (a - x).abs() <= atol * (1.0 + x.abs()));
            !(near(i) || (i > 0 && near(i - 1)))
        })
        .collect()
}

/// Closed-form coefficients of a two-hidden-layer network with unit first
/// layer, `|c_j| = 1` and zeros at the hierarchy's level-2 knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCoeffs {
    /// `α_{j,ν}` at `x_{j,ν}`, one row per unit.
    pub unit: Vec<Vec<f64>>,
    /// `α_ℓ` at the level-1 knots.
    pub level1: Vec<f64>,
}

/// `α_{j,ν} = a3_j ∏_{ℓ≤ν} |r_{j,ℓ}|` and
/// `α_ℓ = ½ Σ_j a3_j (x_{j,ℓ} - x_{j,ℓ-1})/(x_ℓ - x_{j,ℓ}) ∏_{k<ℓ} r_{j,k} ((-1)^{ℓ+1} + sign c_j)`
/// with `r_{j,ℓ} = (x_ℓ - x_{j,ℓ-1})/(x_ℓ - x_{j,ℓ})`.
pub fn coeffs_from_knots(h: &KnotHierarchy, a3: &[f64], c_signs: &[f64]) -> Result<ClosedFormCoeffs> {
    let (n1, n2) = (h.n1(), h.n2());
    ensure_len("output weights", n2, a3.len())?;
    ensure_len("source channel signs", n2, c_signs.len())?;
    ensure_finite("output weights", a3)?;
    if let Some(c) = c_signs.iter().find(|&&c| c != 1.0 && c != -1.0) {
        return Err(Error::InvalidOption(format!("source channel sign must be -1 or 1, got {c}")));
    }
    let x = h.level1();
    let mut unit = Vec::with_capacity(n2);
    let mut level1 = vec![0.0; n1];
    for (j, row) in h.level2().iter().enumerate() {
        let mut prod = 1.0;
        let mut coeffs = Vec::with_capacity(n1 + 1);
        coeffs.push(a3[j]);
        for l in 1..=n1 {
            let lead = (row[l] - row[l - 1]) / (x[l - 1] - row[l]) * prod;
            let parity = if l % 2 == 1 { 1.0 } else { -1.0 };
            level1[l - 1] += 0.5 * a3[j] * lead * (parity + c_signs[j]);
            prod *= (x[l - 1] - row[l - 1]) / (x[l - 1] - row[l]);
            coeffs.push(a3[j] * prod.abs());
        }
        unit.push(coeffs);
    }
    Ok(ClosedFormCoeffs { unit, level1 })
}
