use crate::error::{ensure_finite, ensure_len, Error, Result};

/// First layer `F1 = t A1 + b1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputLayer {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

/// A layer `F = A σ(F_prev) + t c + b`. `weights` is row-major, one row per unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub source: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn width(&self) -> usize {
        self.bias.len()
    }

    /// Layer without a source channel.
    pub fn affine(weights: Vec<Vec<f64>>, bias: Vec<f64>) -> Self {
        let source = vec![0.0; bias.len()];
        Layer {
            weights,
            source,
            bias,
        }
    }
}

/// Scalar-input, scalar-output ReLU network with source channels.
///
/// `layers` holds layers 2..=L; the last one has width 1 and produces the output.
#[derive(Debug, Clone, PartialEq)]
pub struct ReluNetwork {
    input: InputLayer,
    layers: Vec<Layer>,
}

impl ReluNetwork {
    pub fn new(input: InputLayer, layers: Vec<Layer>) -> Result<Self> {
        let net = ReluNetwork { input, layers };
        net.validate()?;
        Ok(net)
    }

    /// `f(t) = c t + b + Σ a2_j σ(a1_j t + b1_j)`.
    pub fn shallow(a1: Vec<f64>, b1: Vec<f64>, a2: Vec<f64>, c: f64, b: f64) -> Result<Self> {
        ReluNetwork::new(
            InputLayer {
                weights: a1,
                bias: b1,
            },
            vec![Layer {
                weights: vec![a2],
                source: vec![c],
                bias: vec![b],
            }],
        )
    }

    fn validate(&self) -> Result<()> {
        ensure_finite("layer 1 weights", &self.input.weights)?;
        ensure_finite("layer 1 bias", &self.input.bias)?;
        ensure_len("layer 1 bias", self.input.weights.len(), self.input.bias.len())?;
        if self.layers.is_empty() {
            return Err(Error::InvalidNetwork(
                "a network needs at least one layer after the input layer".into(),
            ));
        }
        let mut prev = self.input.weights.len();
        for (i, layer) in self.layers.iter().enumerate() {
            let l = i + 2;
            let n = layer.bias.len();
            ensure_finite(&format!("layer {l} bias"), &layer.bias)?;
            ensure_finite(&format!("layer {l} source channel"), &layer.source)?;
            ensure_len(&format!("layer {l} source channel"), n, layer.source.len())?;
            ensure_len(&format!("layer {l} weight rows"), n, layer.weights.len())?;
            for row in &layer.weights {
                ensure_finite(&format!("layer {l} weights"), row)?;
                ensure_len(&format!("layer {l} weight columns"), prev, row.len())?;
            }
            prev = n;
        }
        if prev != 1 {
            return Err(Error::DimensionMismatch {
                what: "output width".into(),
                expected: 1,
                found: prev,
            });
        }
        Ok(())
    }

    pub fn input(&self) -> &InputLayer {
        &self.input
    }

    /// Layers 2..=L.
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of layers `L`.
    pub fn depth(&self) -> usize {
        self.layers.len() + 1
    }

    /// `(n0, n1, ..., nL)` with `n0 = nL = 1`.
    pub fn widths(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.layers.len() + 2);
        w.push(1);
        w.push(self.input.weights.len());
        w.extend(self.layers.iter().map(Layer::width));
        w
    }

    pub fn output(&self) -> &Layer {
        &self.layers[self.layers.len() - 1]
    }

    pub fn into_parts(self) -> (InputLayer, Vec<Layer>) {
        (self.input, self.layers)
    }
}

/// Largest possible knot count `∏_{ℓ=1}^{L-1}(n_ℓ + 1) - 1` for the width vector `(n0, ..., nL)`.
pub fn knot_bound(widths: &[usize]) -> usize {
    if widths.len() < 3 {
        return 0;
    }
    widths[1..widths.len() - 1]
        .iter()
        .fold(1usize, |acc, &n| acc.saturating_mul(n + 1))
        - 1
}
