//! Network-to-spline compilation and the shallow embedding of splines.

use crate::bundle::SplineBundle;
use crate::error::{ensure_finite, ensure_len, Error, Result};
use crate::network::{InputLayer, Layer, ReluNetwork};
use crate::spline::{relu, CplSpline, PiecewiseForm};
use crate::tol::Tolerances;

/// Spline of `c2 t + b2 + Σ a2_j σ(a1_j t + b1_j)`.
///
/// Units with `a1_j == 0` are constant and fold into the intercept.
pub fn shallow_to_spline(
    c2: f64,
    b2: f64,
    a1: &[f64],
    a2: &[f64],
    b1: &[f64],
    tol: &Tolerances,
) -> Result<CplSpline> {
    ensure_len("shallow output weights", a1.len(), a2.len())?;
    ensure_len("shallow first-layer bias", a1.len(), b1.len())?;
    ensure_finite("shallow parameters", &[c2, b2])?;
    ensure_finite("shallow first-layer weights", a1)?;
    ensure_finite("shallow output weights", a2)?;
    ensure_finite("shallow first-layer bias", b1)?;
    let (mut q1, mut q0) = (c2, b2);
    let mut knots = Vec::with_capacity(a1.len());
    let mut coeffs = Vec::with_capacity(a1.len());
    for ((&a, &w), &b) in a1.iter().zip(a2).zip(b1) {
        if a == 0.0 {
            q0 += w * relu(b);
            continue;
        }
        if a < 0.0 {
            q1 += a * w;
            q0 += b * w;
        }
        knots.push(-b / a);
        coeffs.push(w * a.abs());
    }
    ensure_finite("first-layer knots", &knots)?;
    CplSpline::canonical(q1, q0, knots, coeffs, tol)
}

/// Shallow network realizing `s`: unit weights, biases `-x_k`, output weights `α_k`.
pub fn spline_to_shallow(s: &CplSpline) -> ReluNetwork {
    ReluNetwork::shallow(
        vec![1.0; s.len()],
        s.knots().iter().map(|&x| -x).collect(),
        s.coeffs().to_vec(),
        s.q1(),
        s.q0(),
    )
    .expect("a valid spline gives a valid shallow network")
}

/// Output of [`first_layer_canonicalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct FirstLayerForm {
    /// Layer-2 pre-activations as splines over the sorted first-layer knots.
    pub bundle: SplineBundle,
    /// Equivalent network with `A1 = 1` and `b1 = -x`.
    pub network: ReluNetwork,
    pub original_width: usize,
    /// Number of distinct active first-layer knots.
    pub effective_width: usize,
}

impl FirstLayerForm {
    pub fn is_reduced(&self) -> bool {
        self.effective_width < self.original_width
    }
}

/// Rewrites layers 1-2 so that the first layer is `σ(t - x_k)` with sorted,
/// distinct knots `x_k`. Units sharing a knot are merged, constant units fold
/// into the layer-2 intercept, and knots with an all-zero column are removed.
pub fn first_layer_canonicalize(net: &ReluNetwork, tol: &Tolerances) -> Result<FirstLayerForm> {
    let input = net.input();
    let layer2 = &net.layers()[0];
    let n1 = input.weights.len();
    let rows = layer2.width();

    let mut q1s = layer2.source.clone();
    let mut q0s = layer2.bias.clone();
    let mut cols: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n1);
    for k in 0..n1 {
        let (a, b) = (input.weights[k], input.bias[k]);
        if a == 0.0 {
            for j in 0..rows {
                q0s[j] += layer2.weights[j][k] * relu(b);
            }
            continue;
        }
        if a < 0.0 {
            for j in 0..rows {
                q1s[j] += a * layer2.weights[j][k];
                q0s[j] += b * layer2.weights[j][k];
            }
        }
        let x = -b / a;
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("first-layer knot of unit {}", k + 1)));
        }
        cols.push((x, (0..rows).map(|j| layer2.weights[j][k] * a.abs()).collect()));
    }
    cols.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut merged: Vec<(f64, Vec<f64>)> = Vec::with_capacity(cols.len());
    for (x, col) in cols {
        match merged.last_mut() {
            Some(last) if x - last.0 <= tol.merge => {
                for (acc, v) in last.1.iter_mut().zip(col) {
                    *acc += v;
                }
            }
            _ => merged.push((x, col)),
        }
    }
    merged.retain(|(_, col)| col.iter().any(|v| v.abs() > tol.zero));

    let knots: Vec<f64> = merged.iter().map(|(x, _)| *x).collect();
    let coeffs: Vec<Vec<f64>> = (0..rows)
        .map(|j| merged.iter().map(|(_, col)| col[j]).collect())
        .collect();
    let effective = knots.len();

    let mut layers = net.layers().to_vec();
    layers[0] = Layer {
        weights: coeffs.clone(),
        source: q1s.clone(),
        bias: q0s.clone(),
    };
    let network = ReluNetwork::new(
        InputLayer {
            weights: vec![1.0; effective],
            bias: knots.iter().map(|&x| -x).collect(),
        },
        layers,
    )?;
    let bundle = SplineBundle::new(knots, q1s, q0s, coeffs)?;
    Ok(FirstLayerForm {
        bundle,
        network,
        original_width: n1,
        effective_width: effective,
    })
}

/// `σ∘f` split into its pieces: the linear part, the new coefficient of every
/// existing knot, and the zero crossings with their coefficients.
struct SigmaParts {
    slope: f64,
    intercept: f64,
    knot_coeffs: Vec<f64>,
    crossings: Vec<(f64, f64)>,
}

fn classify(v: f64, scale: f64, zero: f64) -> i8 {
    if v.abs() <= zero * (1.0 + scale) {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

fn end_sign(mu: f64, eta: f64, zero: f64, at_right: bool) -> i8 {
    if mu.abs() > zero {
        let s = if mu > 0.0 { 1 } else { -1 };
        if at_right {
            s
        } else {
            -s
        }
    } else {
        classify(eta, 0.0, zero)
    }
}

fn sigma_parts(p: &PiecewiseForm, coeffs: &[f64], tol: &Tolerances) -> SigmaParts {
    let n = p.knots.len();
    let zero = tol.zero;
    let signs: Vec<i8> = (0..n)
        .map(|k| {
            let lead = p.mu[k] * p.knots[k];
            classify(lead + p.eta[k], lead.abs(), zero)
        })
        .collect();
    let left = end_sign(p.mu[0], p.eta[0], zero, false);
    let right = end_sign(p.mu[n], p.eta[n], zero, true);

    let (slope, intercept) = if p.mu[0] < -zero {
        (p.mu[0], p.eta[0])
    } else if p.mu[0].abs() <= zero {
        (0.0, relu(p.eta[0]))
    } else {
        (0.0, 0.0)
    };

    let knot_coeffs = (0..n)
        .map(|k| match signs[k] {
            1 => coeffs[k],
            0 => relu(p.mu[k + 1]) + relu(-p.mu[k]),
            _ => 0.0,
        })
        .collect();

    let mut crossings = Vec::new();
    for nu in 0..=n {
        let sl = if nu == 0 { left } else { signs[nu - 1] };
        let sr = if nu == n { right } else { signs[nu] };
        if sl * sr != -1 || p.mu[nu] == 0.0 {
            continue;
        }
        let lo = if nu == 0 { f64::NEG_INFINITY } else { p.knots[nu - 1] };
        let hi = if nu == n { f64::INFINITY } else { p.knots[nu] };
        let x = (-p.eta[nu] / p.mu[nu]).clamp(lo, hi);
        if x.is_finite() {
            crossings.push((x, p.mu[nu].abs()));
        }
    }
    SigmaParts {
        slope,
        intercept,
        knot_coeffs,
        crossings,
    }
}

/// Merges the existing (strictly increasing) knots with candidate knots.
///
/// Entries are grouped left to right, each group anchored at its first
/// member and absorbing every entry within `merge` of that anchor. A group
/// sits at its existing knot when it has one. Returns the group coordinates
/// and the group index of every existing knot and every candidate.
fn merge_knots(existing: &[f64], candidates: &[f64], merge: f64) -> (Vec<f64>, Vec<usize>, Vec<usize>) {
    let mut entries: Vec<(f64, bool, usize)> = existing
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, true, i))
        .chain(candidates.iter().enumerate().map(|(i, &x)| (x, false, i)))
        .collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

    let mut coords: Vec<f64> = Vec::new();
    let mut has_existing: Vec<bool> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    let mut map_existing = vec![0; existing.len()];
    let mut map_candidates = vec![0; candidates.len()];
    for (x, is_existing, i) in entries {
        if coords.is_empty() || x - anchor > merge {
            anchor = x;
            coords.push(x);
            has_existing.push(is_existing);
        } else if is_existing && !has_existing[coords.len() - 1] {
            let g = coords.len() - 1;
            coords[g] = x;
            has_existing[g] = true;
        }
        let g = coords.len() - 1;
        if is_existing {
            map_existing[i] = g;
        } else {
            map_candidates[i] = g;
        }
    }
    (coords, map_existing, map_candidates)
}

/// `max(0, f(t))` as a canonical spline.
pub fn sigma_compose(f: &CplSpline, tol: &Tolerances) -> CplSpline {
    let p = f.piecewise();
    let parts = sigma_parts(&p, f.coeffs(), tol);
    let cand: Vec<f64> = parts.crossings.iter().map(|c| c.0).collect();
    let (coords, map_e, map_c) = merge_knots(f.knots(), &cand, tol.merge);
    let mut coeffs = vec![0.0; coords.len()];
    for (k, &a) in parts.knot_coeffs.iter().enumerate() {
        coeffs[map_e[k]] += a;
    }
    for (c, &(_, a)) in parts.crossings.iter().enumerate() {
        coeffs[map_c[c]] += a;
    }
    CplSpline::canonical(parts.slope, parts.intercept, coords, coeffs, tol)
        .expect("finite inputs give finite outputs")
}

/// Units `c_k t + b_k + Σ_j a_{k,j} σ(unit_j(t))` over the merged knot set.
pub fn layer_transfer(
    bundle: &SplineBundle,
    weights: &[Vec<f64>],
    source: &[f64],
    bias: &[f64],
    tol: &Tolerances,
) -> Result<SplineBundle> {
    let rows = weights.len();
    let width = bundle.width();
    ensure_len("layer source channel", rows, source.len())?;
    ensure_len("layer bias", rows, bias.len())?;
    for row in weights {
        ensure_len("layer weight columns", width, row.len())?;
        ensure_finite("layer weights", row)?;
    }
    ensure_finite("layer source channel", source)?;
    ensure_finite("layer bias", bias)?;

    let parts: Vec<SigmaParts> = (0..width)
        .map(|j| sigma_parts(&bundle.piecewise(j), &bundle.coeff_matrix()[j], tol))
        .collect();
    let cand: Vec<f64> = parts.iter().flat_map(|p| p.crossings.iter().map(|c| c.0)).collect();
    let (coords, map_e, map_c) = merge_knots(bundle.knots(), &cand, tol.merge);

    let mut q1s = source.to_vec();
    let mut q0s = bias.to_vec();
    let mut matrix = vec![vec![0.0; coords.len()]; rows];
    for (k, w) in weights.iter().enumerate() {
        let mut c_off = 0;
        for (j, part) in parts.iter().enumerate() {
            let a = w[j];
            q1s[k] += a * part.slope;
            q0s[k] += a * part.intercept;
            for (i, &v) in part.knot_coeffs.iter().enumerate() {
                matrix[k][map_e[i]] += a * v;
            }
            for (c, &(_, v)) in part.crossings.iter().enumerate() {
                matrix[k][map_c[c_off + c]] += a * v;
            }
            c_off += part.crossings.len();
        }
    }

    let keep: Vec<usize> = (0..coords.len())
        .filter(|&i| matrix.iter().any(|row| row[i].abs() > tol.zero))
        .collect();
    let knots = keep.iter().map(|&i| coords[i]).collect();
    let coeffs = matrix
        .into_iter()
        .map(|row| keep.iter().map(|&i| row[i]).collect())
        .collect();
    Ok(SplineBundle::from_parts_unchecked(knots, q1s, q0s, coeffs))
}

/// Canonical spline of the network output.
pub fn dnn_to_spline(net: &ReluNetwork, tol: &Tolerances) -> Result<CplSpline> {
    let mut bundle = first_layer_canonicalize(net, tol)?.bundle;
    for layer in &net.layers()[1..] {
        bundle = layer_transfer(&bundle, &layer.weights, &layer.source, &layer.bias, tol)?;
    }
    CplSpline::canonical(
        bundle.q1s()[0],
        bundle.q0s()[0],
        bundle.knots().to_vec(),
        bundle.coeff_matrix()[0].clone(),
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{equivalence_error, probe_grid, union_grid};
    use crate::network::knot_bound;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn maximal_net() -> ReluNetwork {
        ReluNetwork::new(
            InputLayer {
                weights: vec![1.0, -1.0, -1.0],
                bias: vec![-1.0, 2.0, 3.0],
            },
            vec![
                Layer::affine(
                    vec![vec![-2.0, 2.0, -3.0], vec![-1.0, 1.0, -1.5], vec![1.0, -2.0, 2.5]],
                    vec![4.5, 2.2, -3.3],
                ),
                Layer::affine(vec![vec![1.0, 1.0, 1.0]], vec![0.0]),
            ],
        )
        .unwrap()
    }

    fn assert_all_close(a: &[f64], b: &[f64], eps: f64) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = eps);
        }
    }

    #[test]
    fn shallow_unit_of_worked_network() {
        let s = shallow_to_spline(0.0, 4.5, &[1.0, -1.0, -1.0], &[-2.0, 2.0, -3.0], &[-1.0, 2.0, 3.0], &tol())
            .unwrap();
        assert_eq!((s.q1(), s.q0()), (1.0, -0.5));
        assert_eq!(s.knots(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.coeffs(), &[-2.0, 2.0, -3.0]);
    }

    #[test]
    fn shallow_trivial_cases() {
        let s = shallow_to_spline(0.0, 0.0, &[1.0], &[1.0], &[0.0], &tol()).unwrap();
        assert_eq!((s.q1(), s.q0(), s.knots(), s.coeffs()), (0.0, 0.0, &[0.0][..], &[1.0][..]));
        let dead = shallow_to_spline(1.0, 0.0, &[0.0], &[3.0], &[2.0], &tol()).unwrap();
        assert_eq!((dead.q1(), dead.q0()), (1.0, 6.0));
        assert!(dead.is_empty());
        assert!(matches!(
            shallow_to_spline(0.0, 0.0, &[1.0, 2.0], &[1.0], &[0.0, 0.0], &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sigma_of_identity_and_negative_constant() {
        let id = sigma_compose(&CplSpline::linear(1.0, 0.0), &tol());
        assert_eq!((id.q1(), id.q0(), id.knots(), id.coeffs()), (0.0, 0.0, &[0.0][..], &[1.0][..]));
        let neg = sigma_compose(&CplSpline::linear(0.0, -1.0), &tol());
        assert_eq!(neg, CplSpline::linear(0.0, 0.0));
    }

    #[test]
    fn sigma_of_worked_unit_crossings() {
        let f = CplSpline::new(1.0, -0.5, vec![1.0, 2.0, 3.0], vec![-2.0, 2.0, -3.0]).unwrap();
        let g = sigma_compose(&f, &tol());
        let parts = sigma_parts(&f.piecewise(), f.coeffs(), &tol());
        let xs: Vec<f64> = parts.crossings.iter().map(|c| c.0).collect();
        let cs: Vec<f64> = parts.crossings.iter().map(|c| c.1).collect();
        assert_all_close(&xs, &[0.5, 1.5, 2.5, 3.25], 1e-12);
        assert_all_close(&cs, &[1.0, 1.0, 1.0, 2.0], 1e-12);
        let grid = probe_grid(g.knots(), 2.0, 3);
        for t in grid {
            assert_abs_diff_eq!(g.value(t), relu(f.value(t)), epsilon = 1e-12);
        }
    }

    #[test]
    fn sigma_with_knot_on_zero() {
        // -|t| and |t| both vanish exactly at their knot
        let f = CplSpline::new(1.0, 0.0, vec![0.0], vec![-2.0]).unwrap();
        let g = sigma_compose(&f, &tol());
        assert_eq!(g, CplSpline::linear(0.0, 0.0));
        let v = CplSpline::new(-1.0, 0.0, vec![0.0], vec![2.0]).unwrap();
        let g = sigma_compose(&v, &tol());
        assert_eq!(g.knots(), &[0.0]);
        assert_eq!(g.coeffs(), &[2.0]);
        assert_eq!((g.q1(), g.q0()), (-1.0, 0.0));
    }

    #[test]
    fn first_layer_of_worked_network() {
        let form = first_layer_canonicalize(&maximal_net(), &tol()).unwrap();
        assert_all_close(form.bundle.q1s(), &[1.0, 0.5, -0.5], 1e-12);
        assert_all_close(form.bundle.q0s(), &[-0.5, -0.3, 0.2], 1e-12);
        assert_eq!(form.bundle.knots(), &[1.0, 2.0, 3.0]);
        assert_eq!(form.effective_width, 3);
        assert!(!form.is_reduced());
        let again = first_layer_canonicalize(&form.network, &tol()).unwrap();
        assert_eq!(again.network, form.network);
    }

    #[test]
    fn first_layer_rescales() {
        let net = ReluNetwork::shallow(vec![2.0], vec![-2.0], vec![3.0], 0.0, 0.0).unwrap();
        let form = first_layer_canonicalize(&net, &tol()).unwrap();
        assert_eq!(form.network.input().weights, vec![1.0]);
        assert_eq!(form.bundle.knots(), &[1.0]);
        assert_eq!(form.bundle.coeff_matrix(), &[vec![6.0]]);
    }

    #[test]
    fn first_layer_reduces_degenerate_units() {
        let net = ReluNetwork::shallow(
            vec![1.0, 2.0, 0.0, 1.0],
            vec![-1.0, -2.0, 5.0, -3.0],
            vec![1.0, 1.0, 1.0, 0.0],
            0.0,
            0.0,
        )
        .unwrap();
        let form = first_layer_canonicalize(&net, &tol()).unwrap();
        assert_eq!(form.effective_width, 1);
        assert!(form.is_reduced());
        assert_eq!(form.bundle.q0s(), &[5.0]);
        assert_eq!(form.bundle.coeff_matrix(), &[vec![3.0]]);
    }

    #[test]
    fn worked_network_has_fifteen_knots() {
        let s = dnn_to_spline(&maximal_net(), &tol()).unwrap();
        let mut expected = vec![
            1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 3.25, 0.6, 1.4, 2.6, 3.2, 0.4, 1.6, 32.0 / 15.0, 4.3,
        ];
        expected.sort_by(f64::total_cmp);
        assert_all_close(s.knots(), &expected, 1e-9);
        let grid = probe_grid(s.knots(), 5.0, 3);
        assert!(equivalence_error(&maximal_net(), &s, &grid) <= 1e-12);
    }

    #[test]
    fn layer_transfer_unit_row_is_sigma() {
        let form = first_layer_canonicalize(&maximal_net(), &tol()).unwrap();
        for j in 0..3 {
            let mut row = vec![0.0; 3];
            row[j] = 1.0;
            let b = layer_transfer(&form.bundle, &[row], &[0.0], &[0.0], &tol()).unwrap();
            let via = CplSpline::canonical(b.q1s()[0], b.q0s()[0], b.knots().to_vec(), b.coeff_matrix()[0].clone(), &tol())
                .unwrap();
            let direct = sigma_compose(&form.bundle.unit(j).canonicalize(&tol()), &tol());
            assert_all_close(via.knots(), direct.knots(), 1e-12);
            assert_all_close(via.coeffs(), direct.coeffs(), 1e-12);
            assert_abs_diff_eq!(via.q1(), direct.q1(), epsilon = 1e-12);
            assert_abs_diff_eq!(via.q0(), direct.q0(), epsilon = 1e-12);
        }
    }

    #[test]
    fn layer_transfer_rejects_bad_rows() {
        let form = first_layer_canonicalize(&maximal_net(), &tol()).unwrap();
        assert!(matches!(
            layer_transfer(&form.bundle, &[vec![1.0, 1.0]], &[0.0], &[0.0], &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn round_trip_of_empty_spline() {
        let s = CplSpline::linear(2.0, -1.0);
        let net = spline_to_shallow(&s);
        assert_eq!(net.widths(), vec![1, 0, 1]);
        assert_eq!(dnn_to_spline(&net, &tol()).unwrap(), s);
    }

    #[test]
    fn merge_prefers_existing_coordinates() {
        let (coords, me, mc) = merge_knots(&[1.0, 2.0], &[1.0 - 1e-13, 1.5, 2.0], 1e-12);
        assert_eq!(coords, vec![1.0, 1.5, 2.0]);
        assert_eq!(me, vec![0, 2]);
        assert_eq!(mc, vec![0, 1, 2]);
    }

    fn small_net() -> impl Strategy<Value = ReluNetwork> {
        let widths = (1usize..=3, proptest::collection::vec(1usize..=4, 1..=3));
        widths.prop_flat_map(|(_, hidden)| {
            let mut dims = vec![1usize];
            dims.extend(hidden.iter().copied());
            dims.push(1);
            let n1 = dims[1];
            let first = (
                proptest::collection::vec(-2.0..2.0f64, n1),
                proptest::collection::vec(-2.0..2.0f64, n1),
            );
            let rest: Vec<_> = dims
                .windows(2)
                .skip(1)
                .map(|w| {
                    (
                        proptest::collection::vec(proptest::collection::vec(-2.0..2.0f64, w[0]), w[1]),
                        proptest::collection::vec(-2.0..2.0f64, w[1]),
                        proptest::collection::vec(-2.0..2.0f64, w[1]),
                    )
                })
                .collect();
            (first, rest).prop_map(|((a, b), rest)| {
                ReluNetwork::new(
                    InputLayer { weights: a, bias: b },
                    rest.into_iter()
                        .map(|(weights, source, bias)| Layer { weights, source, bias })
                        .collect(),
                )
                .unwrap()
            })
        })
    }

    fn canonical_spline() -> impl Strategy<Value = CplSpline> {
        (
            -3.0..3.0f64,
            -3.0..3.0f64,
            proptest::collection::vec((-10.0..10.0f64, -3.0..3.0f64), 0..12),
        )
            .prop_map(|(q1, q0, terms)| {
                let (k, a): (Vec<f64>, Vec<f64>) = terms.into_iter().unzip();
                CplSpline::canonical(q1, q0, k, a, &Tolerances::default()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn dnn_to_spline_is_exact(net in small_net()) {
            let s = dnn_to_spline(&net, &tol()).unwrap();
            let grid = probe_grid(s.knots(), 5.0, 3);
            prop_assert!(equivalence_error(&net, &s, &grid) <= 1e-8);
            prop_assert!(s.len() <= knot_bound(&net.widths()));
            prop_assert!(s.is_canonical(&tol()));
        }

        #[test]
        fn sigma_compose_matches_relu(s in canonical_spline()) {
            let g = sigma_compose(&s, &tol());
            prop_assert!(g.len() <= 2 * s.len() + 1);
            prop_assert!(g.is_canonical(&tol()));
            for t in union_grid(s.knots(), g.knots(), 5.0, 3) {
                prop_assert!((g.value(t) - relu(s.value(t))).abs() <= 1e-10 * (1.0 + s.value(t).abs()));
            }
        }

        #[test]
        fn shallow_round_trip_is_bitwise(s in canonical_spline()) {
            let net = spline_to_shallow(&s);
            let back = shallow_to_spline(
                net.output().source[0],
                net.output().bias[0],
                &net.input().weights,
                &net.output().weights[0],
                &net.input().bias,
                &tol(),
            )
            .unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn two_layer_matches_shallow_path(
            a1 in proptest::collection::vec(-2.0..2.0f64, 0..6),
            seed in proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 6),
            c in -2.0..2.0f64,
            b in -2.0..2.0f64,
        ) {
            let n = a1.len();
            let b1: Vec<f64> = seed.iter().take(n).map(|p| p.0).collect();
            let a2: Vec<f64> = seed.iter().take(n).map(|p| p.1).collect();
            let net = ReluNetwork::shallow(a1.clone(), b1.clone(), a2.clone(), c, b).unwrap();
            let deep = dnn_to_spline(&net, &tol()).unwrap();
            let flat = shallow_to_spline(c, b, &a1, &a2, &b1, &tol()).unwrap();
            prop_assert_eq!(deep, flat);
        }
    }
}
