//! Networks whose spline image has prescribed active breakpoints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::missing_knots;
use crate::error::{ensure_finite, ensure_len, Error, Result};
use crate::hierarchy::KnotHierarchy;
use crate::network::{InputLayer, Layer, ReluNetwork};
use crate::tol::Tolerances;
use crate::transfer::dnn_to_spline;

/// Absolute/relative distance within which a prescribed knot counts as realized.
pub const ACTIVITY_TOL: f64 = 1e-9;

/// Random output-weight retries after the deterministic first attempt.
pub const A4_RETRIES: usize = 32;

/// Free choices left open by the constructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthesisOptions {
    /// Output-row magnitudes (two hidden layers) or the output row itself
    /// (no-source construction). Empty means all ones.
    pub a3: Vec<f64>,
    /// Global sign of the alternating output row: `sign(a3_j) = ±(-1)^j`.
    pub sign_plus: bool,
    /// Third-layer signs `ε_r ∈ {-1, 1}`. Empty means greedy selection.
    pub eps: Vec<f64>,
    /// Output weights of the three-hidden-layer network. Empty means automatic.
    pub a4: Vec<f64>,
    pub c_out: f64,
    pub b_out: f64,
    /// Initial slopes `a_{j,1}` of the no-source construction. Empty means `(-1, 1, -1, ...)`.
    pub seeds: Vec<f64>,
    /// Seed of the output-weight retry generator.
    pub seed: u64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            a3: Vec::new(),
            sign_plus: true,
            eps: Vec::new(),
            a4: Vec::new(),
            c_out: 0.0,
            b_out: 0.0,
            seeds: Vec::new(),
            seed: 0,
        }
    }
}

fn check_interlaced(x1: &[f64], row: &[f64]) -> Result<()> {
    ensure_len("level 2 row", x1.len() + 1, row.len())?;
    ensure_finite("level 1 knots", x1)?;
    ensure_finite("level 2 knots", row)?;
    for (nu, &x) in row.iter().enumerate() {
        let lo = if nu == 0 { f64::NEG_INFINITY } else { x1[nu - 1] };
        let hi = x1.get(nu).copied().unwrap_or(f64::INFINITY);
        if !(lo < x && x < hi) {
            return Err(Error::Interlacing(format!("{x} is outside ({lo}, {hi})")));
        }
    }
    Ok(())
}

/// Slopes `μ_0 = c, μ_ν = μ_{ν-1} (x_ν - x_{j,ν-1}) / (x_ν - x_{j,ν})` of a unit
/// with zeros at `row`.
pub fn slopes_from_knots(c_sign: f64, x1: &[f64], row: &[f64]) -> Result<Vec<f64>> {
    check_interlaced(x1, row)?;
    let mut mu = Vec::with_capacity(row.len());
    mu.push(c_sign);
    for nu in 1..row.len() {
        let prev = mu[nu - 1];
        mu.push(prev * (x1[nu - 1] - row[nu - 1]) / (x1[nu - 1] - row[nu]));
    }
    Ok(mu)
}

/// `a_{j,k} = μ_{j,k} - μ_{j,k-1}`.
pub fn weights_from_slopes(mu: &[Vec<f64>]) -> Vec<Vec<f64>> {
    mu.iter()
        .map(|row| row.windows(2).map(|w| w[1] - w[0]).collect())
        .collect()
}

fn sign_j(j: usize) -> f64 {
    // (-1)^{j+1} for the 1-based index j + 1
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn nonzero_entries(what: &str, v: &[f64], expected: usize) -> Result<()> {
    ensure_len(what, expected, v.len())?;
    ensure_finite(what, v)?;
    if v.iter().any(|&a| a == 0.0) {
        return Err(Error::InvalidOption(format!("{what} entries must be nonzero")));
    }
    Ok(())
}

/// Layers 1 and 2 of the source-channel construction: `A1 = 1`, `b1 = -x`,
/// `c_j = (-1)^{j+1}`, `b_j = -x_{j,0} c_j` and `A2` from the slope recursion.
fn lower_layers(h: &KnotHierarchy) -> Result<(InputLayer, Layer)> {
    let x1 = h.level1();
    let mut mu = Vec::with_capacity(h.n2());
    let mut source = Vec::with_capacity(h.n2());
    let mut bias = Vec::with_capacity(h.n2());
    for (j, row) in h.level2().iter().enumerate() {
        let c = sign_j(j);
        mu.push(slopes_from_knots(c, x1, row)?);
        source.push(c);
        bias.push(-row[0] * c);
    }
    Ok((
        InputLayer {
            weights: vec![1.0; x1.len()],
            bias: x1.iter().map(|&x| -x).collect(),
        },
        Layer {
            weights: weights_from_slopes(&mu),
            source,
            bias,
        },
    ))
}

fn verify(net: ReluNetwork, prescribed: &[f64], attempts: usize, tol: &Tolerances) -> Result<ReluNetwork> {
    let s = dnn_to_spline(&net, tol)?;
    let inactive = missing_knots(&s, prescribed, ACTIVITY_TOL, tol);
    if inactive.is_empty() {
        Ok(net)
    } else {
        Err(Error::InactiveKnots { inactive, attempts })
    }
}

/// Two hidden layers realizing all `(n1 + 1)(n2 + 1) - 1` knots of `h`
/// (levels 1 and 2) as active breakpoints.
pub fn synth_two_hidden(h: &KnotHierarchy, opts: &SynthesisOptions, tol: &Tolerances) -> Result<ReluNetwork> {
    let n2 = h.n2();
    let mags = if opts.a3.is_empty() { vec![1.0; n2] } else { opts.a3.clone() };
    nonzero_entries("output row", &mags, n2)?;
    ensure_finite("output affine part", &[opts.c_out, opts.b_out])?;
    let global = if opts.sign_plus { 1.0 } else { -1.0 };
    let a3: Vec<f64> = mags
        .iter()
        .enumerate()
        .map(|(j, m)| -global * sign_j(j) * m.abs())
        .collect();
    let (input, layer2) = lower_layers(h)?;
    let net = ReluNetwork::new(
        input,
        vec![
            layer2,
            Layer {
                weights: vec![a3],
                source: vec![opts.c_out],
                bias: vec![opts.b_out],
            },
        ],
    )?;
    verify(net, &h.lower_knots(), 1, tol)
}

/// Two hidden layers without source channel realizing `n1 n2 + n1` sorted knots.
///
/// Knot `(n2 + 1)(k - 1) + 1` becomes first-level knot `k`; the following
/// `n2` knots are the zeros of units `1..=n2` in `(x_k, x_{k+1})`.
pub fn synth_two_hidden_no_source(
    knots: &[f64],
    n1: usize,
    n2: usize,
    opts: &SynthesisOptions,
    tol: &Tolerances,
) -> Result<ReluNetwork> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidOption("both widths must be positive".into()));
    }
    ensure_len("prescribed knots", n1 * n2 + n1, knots.len())?;
    ensure_finite("prescribed knots", knots)?;
    let mut sorted = knots.to_vec();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateKnot(w[0]));
    }
    let seeds = if opts.seeds.is_empty() {
        (0..n2).map(|j| -sign_j(j)).collect()
    } else {
        opts.seeds.clone()
    };
    nonzero_entries("seeds", &seeds, n2)?;
    if n1 > 1 && (seeds.iter().all(|&s| s > 0.0) || seeds.iter().all(|&s| s < 0.0)) {
        return Err(Error::InvalidOption(
            "seeds need at least one sign change when n1 > 1".into(),
        ));
    }
    let a3 = if opts.a3.is_empty() { vec![1.0; n2] } else { opts.a3.clone() };
    ensure_len("output row", n2, a3.len())?;
    ensure_finite("output row", &a3)?;

    let x: Vec<f64> = (0..n1).map(|k| sorted[(n2 + 1) * k]).collect();
    let zero_of = |j: usize, k: usize| sorted[(n2 + 1) * k + 1 + j];
    let mut weights = Vec::with_capacity(n2);
    let mut bias = Vec::with_capacity(n2);
    for (j, &seed) in seeds.iter().enumerate() {
        let mut mu = vec![0.0, seed];
        for k in 1..n1 {
            let prev = mu[k];
            mu.push(prev * (x[k] - zero_of(j, k - 1)) / (x[k] - zero_of(j, k)));
        }
        weights.push(mu.windows(2).map(|w| w[1] - w[0]).collect());
        bias.push(seed * (x[0] - zero_of(j, 0)));
    }
    let net = ReluNetwork::new(
        InputLayer {
            weights: vec![1.0; n1],
            bias: x.iter().map(|&v| -v).collect(),
        },
        vec![
            Layer::affine(weights, bias),
            Layer {
                weights: vec![a3],
                source: vec![opts.c_out],
                bias: vec![opts.b_out],
            },
        ],
    )?;
    verify(net, &sorted, 1, tol)
}

/// `Σ_{k∈I} P_{k-1} - 1 - Σ_{k∈I} P_k` with `P_k = ∏_{ℓ≤k} (x_ℓ - x_{j,ℓ-1})/(x_ℓ - x_{j,ℓ})`.
///
/// `index_set` and `unit` are 1-based; the set must be nonempty and proper.
pub fn redundancy_residual(h: &KnotHierarchy, index_set: &[usize], unit: usize) -> Result<f64> {
    let n1 = h.n1();
    if unit == 0 || unit > h.n2() {
        return Err(Error::InvalidIndexSet(format!("unit {unit} is not in 1..={}", h.n2())));
    }
    let mut set = index_set.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() || set.len() >= n1 || set.len() != index_set.len() {
        return Err(Error::InvalidIndexSet(format!(
            "index set {index_set:?} must be nonempty, proper and without repeats"
        )));
    }
    if let Some(k) = set.iter().find(|&&k| k == 0 || k > n1) {
        return Err(Error::InvalidIndexSet(format!("index {k} is not in 1..={n1}")));
    }
    let x = h.level1();
    let row = &h.level2()[unit - 1];
    let mut prods = vec![1.0];
    for l in 1..=n1 {
        let p = prods[l - 1] * (x[l - 1] - row[l - 1]) / (x[l - 1] - row[l]);
        prods.push(p);
    }
    let before: f64 = set.iter().map(|&k| prods[k - 1]).sum();
    let after: f64 = set.iter().map(|&k| prods[k]).sum();
    Ok(before - 1.0 - after)
}

/// Value and one-sided slopes of `f_{3,r}` at a level-1/2 knot, taken with `ε_r = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnotProbe {
    pub value: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    /// Magnitude of the terms summed into `value`; sets the zero threshold.
    pub scale: f64,
}

impl KnotProbe {
    /// Whether unit sign `eps` keeps the knot active through the final `σ`.
    pub fn covered(&self, eps: f64, tol: &Tolerances) -> bool {
        let v = eps * self.value;
        let thr = tol.zero * (1.0 + self.scale);
        if v.abs() <= thr {
            crate::spline::relu(eps * self.right_slope) + crate::spline::relu(-eps * self.left_slope) > tol.zero
        } else {
            v > 0.0
        }
    }
}

/// Greedy signs: unit `r` takes the sign covering more still-uncovered knots
/// (ties go to `+1`). `probes[r][i]` describes knot `i` for unit `r`.
pub fn epsilon_select(probes: &[Vec<KnotProbe>], tol: &Tolerances) -> Result<Vec<f64>> {
    let m = probes.first().map_or(0, Vec::len);
    for row in probes {
        ensure_len("probe row", m, row.len())?;
        for p in row {
            ensure_finite("probe", &[p.value, p.left_slope, p.right_slope, p.scale])?;
        }
    }
    let mut uncovered: Vec<usize> = (0..m).collect();
    let mut eps = Vec::with_capacity(probes.len());
    for row in probes {
        let plus = uncovered.iter().filter(|&&i| row[i].covered(1.0, tol)).count();
        let minus = uncovered.iter().filter(|&&i| row[i].covered(-1.0, tol)).count();
        let e = if minus > plus { -1.0 } else { 1.0 };
        uncovered.retain(|&i| !row[i].covered(e, tol));
        eps.push(e);
    }
    if uncovered.is_empty() {
        Ok(eps)
    } else {
        Err(Error::Uncovered(uncovered))
    }
}

/// Third-layer row of unit `r` for sign `eps`: `(a_{r,·}, c_r, b_r)`.
fn third_layer_row(h: &KnotHierarchy, x3: &[f64], eps: f64) -> (Vec<f64>, f64, f64) {
    let col0: Vec<f64> = h.level2().iter().map(|r| r[0]).collect();
    let mut mu = vec![eps];
    for j in 1..=col0.len() {
        let prev = mu[j - 1];
        mu.push(prev * (col0[j - 1] - x3[j - 1]) / (col0[j - 1] - x3[j]));
    }
    let a: Vec<f64> = mu.windows(2).map(|w| w[1] - w[0]).collect();
    let mut c = eps;
    let mut b = -eps * x3[0];
    for (j, &v) in a.iter().enumerate() {
        if sign_j(j) < 0.0 {
            c += v;
            b -= v * col0[j];
        }
    }
    (a, c, b)
}

/// Probes of every third-layer unit at every level-1/2 knot, using `ε = 1`.
pub fn third_layer_probes(h: &KnotHierarchy, tol: &Tolerances) -> Result<Vec<Vec<KnotProbe>>> {
    let level3 = h
        .level3()
        .ok_or_else(|| Error::InvalidOption("the hierarchy has no third level".into()))?;
    let (input, layer2) = lower_layers(h)?;
    let lower = h.lower_knots();
    let mut out = Vec::with_capacity(level3.len());
    for x3 in level3 {
        let (a, c, b) = third_layer_row(h, x3, 1.0);
        let net = ReluNetwork::new(
            input.clone(),
            vec![
                layer2.clone(),
                Layer {
                    weights: vec![a],
                    source: vec![c],
                    bias: vec![b],
                },
            ],
        )?;
        let s = dnn_to_spline(&net, tol)?;
        let p = s.piecewise();
        let probes = lower
            .iter()
            .map(|&xi| {
                let near = s
                    .knots()
                    .iter()
                    .position(|&k| (k - xi).abs() <= ACTIVITY_TOL * (1.0 + xi.abs()));
                let (left, right) = match near {
                    Some(k) => (p.mu[k], p.mu[k + 1]),
                    None => {
                        let i = p.interval_of(xi);
                        (p.mu[i], p.mu[i])
                    }
                };
                KnotProbe {
                    value: s.value(xi),
                    left_slope: left,
                    right_slope: right,
                    scale: (left * xi).abs(),
                }
            })
            .collect();
        out.push(probes);
    }
    Ok(out)
}

/// Whether `n3 >= log2(n1 + (n1 + 1) n2)`, the width under which greedy sign
/// selection is guaranteed to succeed.
pub fn width_bound_satisfied(n1: usize, n2: usize, n3: usize) -> bool {
    let m = (n1 + (n1 + 1) * n2) as f64;
    n3 as f64 >= m.log2()
}

/// Three hidden layers realizing every knot of `h` (levels 1 to 3), with all
/// level-3 knots left of `x_1`. Extra breakpoints may appear.
///
/// Signs `ε` come from `opts.eps` or greedy selection. Output weights come
/// from `opts.a4`, or start at `-ε` followed by up to [`A4_RETRIES`] seeded
/// random draws, each checked for activity.
pub fn synth_three_hidden(h: &KnotHierarchy, opts: &SynthesisOptions, tol: &Tolerances) -> Result<ReluNetwork> {
    let level3 = h
        .level3()
        .ok_or_else(|| Error::InvalidOption("the hierarchy has no third level".into()))?;
    let n3 = level3.len();
    ensure_finite("output affine part", &[opts.c_out, opts.b_out])?;
    let eps = if opts.eps.is_empty() {
        epsilon_select(&third_layer_probes(h, tol)?, tol)?
    } else {
        ensure_len("eps", n3, opts.eps.len())?;
        if let Some(e) = opts.eps.iter().find(|&&e| e != 1.0 && e != -1.0) {
            return Err(Error::InvalidOption(format!("eps entries must be -1 or 1, got {e}")));
        }
        opts.eps.clone()
    };
    let (input, layer2) = lower_layers(h)?;
    let mut a3 = Vec::with_capacity(n3);
    let mut c3 = Vec::with_capacity(n3);
    let mut b3 = Vec::with_capacity(n3);
    for (x3, &e) in level3.iter().zip(&eps) {
        let (a, c, b) = third_layer_row(h, x3, e);
        a3.push(a);
        c3.push(c);
        b3.push(b);
    }
    let layer3 = Layer {
        weights: a3,
        source: c3,
        bias: b3,
    };
    let build = |a4: Vec<f64>| {
        ReluNetwork::new(
            input.clone(),
            vec![
                layer2.clone(),
                layer3.clone(),
                Layer {
                    weights: vec![a4],
                    source: vec![opts.c_out],
                    bias: vec![opts.b_out],
                },
            ],
        )
    };
    let prescribed = h.sorted_knots();

    if !opts.a4.is_empty() {
        nonzero_entries("a4", &opts.a4, n3)?;
        return verify(build(opts.a4.clone())?, &prescribed, 1, tol);
    }
    let first = eps.iter().map(|e| -e).collect();
    let mut last = match verify(build(first)?, &prescribed, 1, tol) {
        Ok(net) => return Ok(net),
        Err(e) => e,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..A4_RETRIES {
        let a4: Vec<f64> = (0..n3)
            .map(|_| {
                let m: f64 = rng.random_range(0.5..=2.0);
                if rng.random_bool(0.5) {
                    m
                } else {
                    -m
                }
            })
            .collect();
        match verify(build(a4)?, &prescribed, attempt + 2, tol) {
            Ok(net) => return Ok(net),
            Err(e) => last = e,
        }
    }
    Err(last)
}
