use crate::error::{Error, Result};
use crate::network::ReluNetwork;
use crate::spline::{relu, CplSpline};

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("evaluation point".into()))
    }
}

/// Pre-activations `F_1(t), ..., F_L(t)` of every layer.
pub fn layer_preactivations(net: &ReluNetwork, t: f64) -> Result<Vec<Vec<f64>>> {
    check_t(t)?;
    let input = net.input();
    let mut out = Vec::with_capacity(net.depth());
    let first: Vec<f64> = input
        .weights
        .iter()
        .zip(&input.bias)
        .map(|(&a, &b)| t * a + b)
        .collect();
    out.push(first);
    for layer in net.layers() {
        let prev: Vec<f64> = out[out.len() - 1].iter().map(|&v| relu(v)).collect();
        let next = layer
            .weights
            .iter()
            .zip(&layer.source)
            .zip(&layer.bias)
            .map(|((row, &c), &b)| {
                row.iter().zip(&prev).map(|(&a, &p)| a * p).sum::<f64>() + t * c + b
            })
            .collect();
        out.push(next);
    }
    Ok(out)
}

/// `f_L(t)` through the layer recursion.
pub fn eval_network(net: &ReluNetwork, t: f64) -> Result<f64> {
    let layers = layer_preactivations(net, t)?;
    Ok(layers[layers.len() - 1][0])
}

pub fn eval_spline(spline: &CplSpline, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(spline.value(t))
}

/// Knots, `per_interval` equispaced interior points of every bounded gap, and
/// the two flank points `x_1 - margin`, `x_N + margin`; sorted and deduplicated.
/// An empty knot list yields `(-margin, 0, margin)`. `per_interval` below 1 is
/// treated as 1.
pub fn probe_grid(knots: &[f64], margin: f64, per_interval: usize) -> Vec<f64> {
    if knots.is_empty() {
        return vec![-margin, 0.0, margin];
    }
    let p = per_interval.max(1);
    let mut sorted = knots.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut grid = Vec::with_capacity(sorted.len() * (p + 1) + 2);
    grid.push(sorted[0] - margin);
    for w in sorted.windows(2) {
        grid.push(w[0]);
        let h = (w[1] - w[0]) / (p + 1) as f64;
        grid.extend((1..=p).map(|i| w[0] + i as f64 * h));
    }
    grid.push(sorted[sorted.len() - 1]);
    grid.push(sorted[sorted.len() - 1] + margin);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Probe grid over the union of two knot sets.
pub fn union_grid(a: &[f64], b: &[f64], margin: f64, per_interval: usize) -> Vec<f64> {
    let mut knots = a.to_vec();
    knots.extend_from_slice(b);
    probe_grid(&knots, margin, per_interval)
}

/// `max_t |f_net(t) - s(t)| / (1 + |f_net(t)|)` over the grid.
pub fn equivalence_error(net: &ReluNetwork, spline: &CplSpline, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&t| {
            let f = eval_network(net, t).unwrap_or(f64::NAN);
            (f - spline.value(t)).abs() / (1.0 + f.abs())
        })
        .fold(0.0, f64::max)
}

/// `max_t |f_a(t) - f_b(t)| / (1 + |f_a(t)|)` over the grid for two networks.
pub fn network_distance(a: &ReluNetwork, b: &ReluNetwork, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&t| {
            let fa = eval_network(a, t).unwrap_or(f64::NAN);
            let fb = eval_network(b, t).unwrap_or(f64::NAN);
            (fa - fb).abs() / (1.0 + fa.abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{InputLayer, Layer};
    use proptest::prelude::*;

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

    #[test]
    fn maximal_net_at_zero() {
        let net = maximal_net();
        let pre = layer_preactivations(&net, 0.0).unwrap();
        let expected = [-0.5, -0.3, 0.2];
        for (a, b) in pre[1].iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((eval_network(&net, 0.0).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn constant_network() {
        let net = ReluNetwork::new(
            InputLayer {
                weights: vec![0.0, 0.0],
                bias: vec![0.0, 0.0],
            },
            vec![Layer::affine(vec![vec![0.0, 0.0]], vec![1.75])],
        )
        .unwrap();
        for t in [-3.0, 0.0, 8.5] {
            assert_eq!(eval_network(&net, t).unwrap(), 1.75);
        }
    }

    #[test]
    fn spline_values() {
        let lin = CplSpline::linear(1.0, 0.0);
        assert_eq!(eval_spline(&lin, -5.0).unwrap(), -5.0);
        let s = CplSpline::new(0.0, 0.0, vec![0.0], vec![1.0]).unwrap();
        assert_eq!(eval_spline(&s, 2.0).unwrap(), 2.0);
        assert!(eval_spline(&s, f64::NAN).is_err());
        assert!(eval_network(&maximal_net(), f64::INFINITY).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(probe_grid(&[0.0, 1.0], 1.0, 1), vec![-1.0, 0.0, 0.5, 1.0, 2.0]);
        assert_eq!(probe_grid(&[], 2.0, 1), vec![-2.0, 0.0, 2.0]);
        let nine: Vec<f64> = (1..=9).map(f64::from).collect();
        assert_eq!(probe_grid(&nine, 1.0, 1).len(), 19);
        assert_eq!(probe_grid(&[0.0, 3.0], 1.0, 2), vec![-1.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn shifted_spline_is_detected() {
        let net = ReluNetwork::shallow(vec![1.0], vec![0.0], vec![1.0], 0.0, 0.0).unwrap();
        let s = CplSpline::new(0.0, 0.0, vec![0.0], vec![1.0]).unwrap();
        let grid = probe_grid(s.knots(), 1.0, 1);
        assert_eq!(equivalence_error(&net, &s, &grid), 0.0);
        assert!(equivalence_error(&net, &s.with_offset(1.0), &grid) >= 0.5);
    }

    proptest! {
        #[test]
        fn spline_is_continuous_at_knots(
            q1 in -2.0..2.0f64,
            q0 in -2.0..2.0f64,
            terms in proptest::collection::vec((-5.0..5.0f64, -3.0..3.0f64), 1..10),
        ) {
            let (k, a): (Vec<f64>, Vec<f64>) = terms.into_iter().unzip();
            let s = CplSpline::canonical(q1, q0, k, a, &crate::Tolerances::default()).unwrap();
            let grid = probe_grid(s.knots(), 1.0, 1);
            for w in grid.windows(3) {
                if !s.knots().contains(&w[1]) {
                    continue;
                }
                let (l, m, r) = (s.value(w[0]), s.value(w[1]), s.value(w[2]));
                // extrapolate the neighbouring pieces to the knot
                let scale = 1.0 + l.abs().max(m.abs()).max(r.abs());
                let p = s.piecewise();
                let k = s.knots().iter().position(|&x| x == w[1]).unwrap();
                let left = p.mu[k] * w[1] + p.eta[k];
                let right = p.mu[k + 1] * w[1] + p.eta[k + 1];
                prop_assert!((left - right).abs() <= 1e-12 * scale * (1.0 + w[1].abs()));
                prop_assert!((left - m).abs() <= 1e-12 * scale * (1.0 + w[1].abs()));
            }
        }
    }
}
