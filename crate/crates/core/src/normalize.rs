use crate::error::Result;
use crate::network::{InputLayer, ReluNetwork};
use crate::tol::Tolerances;
use crate::transfer::first_layer_canonicalize;

/// Equivalent network with unit first-layer weights and interior source
/// channels in `{-1, 0, 1}`.
///
/// Hidden layer `ℓ` is rescaled by `D = diag(d_j)`, `d_j = |c_j|` (or 1 when
/// `|c_j| <= tol.zero`, in which case `c_j` is set to 0), and `D` is folded
/// into the columns of layer `ℓ + 1`.
pub fn positive_scale_normalize(net: &ReluNetwork, tol: &Tolerances) -> Result<ReluNetwork> {
    let form = first_layer_canonicalize(net, tol)?;
    let (input, mut layers) = form.network.into_parts();
    for i in 0..layers.len() - 1 {
        let (head, tail) = layers.split_at_mut(i + 1);
        let layer = &mut head[i];
        let next = &mut tail[0];
        for j in 0..layer.width() {
            let c = layer.source[j];
            if tol.is_zero(c) {
                layer.source[j] = 0.0;
                continue;
            }
            let d = c.abs();
            for a in layer.weights[j].iter_mut() {
                *a /= d;
            }
            layer.bias[j] /= d;
            layer.source[j] = c.signum();
            for row in next.weights.iter_mut() {
                row[j] *= d;
            }
        }
    }
    ReluNetwork::new(input, layers)
}

/// True when `A1` is all ones and every interior source channel entry is
/// within `tol.zero` of -1, 0 or 1.
pub fn is_normalized(net: &ReluNetwork, tol: &Tolerances) -> bool {
    let InputLayer { weights, .. } = net.input();
    let unit_first = weights.iter().all(|&a| tol.is_zero(a - 1.0));
    let layers = net.layers();
    let signs = layers[..layers.len() - 1].iter().all(|l| {
        l.source
            .iter()
            .all(|&c| tol.is_zero(c) || tol.is_zero(c - 1.0) || tol.is_zero(c + 1.0))
    });
    unit_first && signs
}
