//! JSON schemas for networks, splines and knot hierarchies, and CSV output.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::KnotHierarchy;
use crate::network::{InputLayer, Layer, ReluNetwork};
use crate::spline::CplSpline;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkJson {
    pub widths: Vec<usize>,
    pub layers: Vec<LayerJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplineJson {
    pub q1: f64,
    pub q0: f64,
    pub knots: Vec<f64>,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchyJson {
    pub level1: Vec<f64>,
    pub level2: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level3: Option<Vec<Vec<f64>>>,
}

/// Contents of a knots file: a hierarchy, a bare array, or `{"knots": [...]}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum KnotsInput {
    Hierarchy(HierarchyJson),
    Flat(Vec<f64>),
    Wrapped { knots: Vec<f64> },
}

impl From<&ReluNetwork> for NetworkJson {
    fn from(net: &ReluNetwork) -> Self {
        let input = net.input();
        let mut layers = vec![LayerJson {
            a: input.weights.iter().map(|&a| vec![a]).collect(),
            b: input.bias.clone(),
            c: None,
        }];
        layers.extend(net.layers().iter().map(|l| LayerJson {
            a: l.weights.clone(),
            b: l.bias.clone(),
            c: Some(l.source.clone()),
        }));
        NetworkJson {
            widths: net.widths(),
            layers,
        }
    }
}

impl TryFrom<NetworkJson> for ReluNetwork {
    type Error = Error;

    fn try_from(j: NetworkJson) -> Result<Self> {
        let l = j.widths.len();
        if l < 3 {
            return Err(Error::Schema(format!(
                "\"widths\" needs at least 3 entries, found {l}"
            )));
        }
        if j.widths[0] != 1 || j.widths[l - 1] != 1 {
            return Err(Error::Schema("\"widths\" must start and end with 1".into()));
        }
        if j.layers.len() != l - 1 {
            return Err(Error::DimensionMismatch {
                what: "\"layers\" count".into(),
                expected: l - 1,
                found: j.layers.len(),
            });
        }
        for (i, layer) in j.layers.iter().enumerate() {
            if layer.b.len() != j.widths[i + 1] {
                return Err(Error::DimensionMismatch {
                    what: format!("layers[{i}].b"),
                    expected: j.widths[i + 1],
                    found: layer.b.len(),
                });
            }
        }
        let mut it = j.layers.into_iter();
        let first = it.next().expect("checked above");
        if first.c.is_some() {
            return Err(Error::Schema("layers[0] takes no \"c\"".into()));
        }
        let mut weights = Vec::with_capacity(first.a.len());
        for (k, row) in first.a.iter().enumerate() {
            if row.len() != 1 {
                return Err(Error::DimensionMismatch {
                    what: format!("layers[0].A[{k}]"),
                    expected: 1,
                    found: row.len(),
                });
            }
            weights.push(row[0]);
        }
        let input = InputLayer {
            weights,
            bias: first.b,
        };
        let layers = it
            .map(|lj| {
                let n = lj.b.len();
                Layer {
                    weights: lj.a,
                    source: lj.c.unwrap_or_else(|| vec![0.0; n]),
                    bias: lj.b,
                }
            })
            .collect();
        ReluNetwork::new(input, layers)
    }
}

impl From<&CplSpline> for SplineJson {
    fn from(s: &CplSpline) -> Self {
        SplineJson {
            q1: s.q1(),
            q0: s.q0(),
            knots: s.knots().to_vec(),
            coeffs: s.coeffs().to_vec(),
        }
    }
}

impl TryFrom<SplineJson> for CplSpline {
    type Error = Error;

    fn try_from(j: SplineJson) -> Result<Self> {
        CplSpline::new(j.q1, j.q0, j.knots, j.coeffs)
    }
}

impl From<&KnotHierarchy> for HierarchyJson {
    fn from(h: &KnotHierarchy) -> Self {
        HierarchyJson {
            level1: h.level1().to_vec(),
            level2: h.level2().to_vec(),
            level3: h.level3().map(<[Vec<f64>]>::to_vec),
        }
    }
}

impl TryFrom<HierarchyJson> for KnotHierarchy {
    type Error = Error;

    fn try_from(j: HierarchyJson) -> Result<Self> {
        KnotHierarchy::new(j.level1, j.level2, j.level3)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn network_from_json(text: &str) -> Result<ReluNetwork> {
    parse::<NetworkJson>(text)?.try_into()
}

pub fn network_to_json(net: &ReluNetwork) -> String {
    render(&NetworkJson::from(net))
}

pub fn spline_from_json(text: &str) -> Result<CplSpline> {
    parse::<SplineJson>(text)?.try_into()
}

pub fn spline_to_json(s: &CplSpline) -> String {
    render(&SplineJson::from(s))
}

pub fn hierarchy_from_json(text: &str) -> Result<KnotHierarchy> {
    parse::<HierarchyJson>(text)?.try_into()
}

pub fn hierarchy_to_json(h: &KnotHierarchy) -> String {
    render(&HierarchyJson::from(h))
}

pub fn knots_from_json(text: &str) -> Result<KnotsInput> {
    parse(text)
}

/// A file holding either a network or a spline.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Network(ReluNetwork),
    Spline(CplSpline),
}

impl Model {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Model::Network(n) => crate::eval::eval_network(n, t),
            Model::Spline(s) => crate::eval::eval_spline(s, t),
        }
    }
}

pub fn model_from_json(text: &str) -> Result<Model> {
    let value: serde_json::Value = parse(text)?;
    if value.get("layers").is_some() {
        network_from_json(text).map(Model::Network)
    } else if value.get("knots").is_some() {
        spline_from_json(text).map(Model::Spline)
    } else {
        Err(Error::Schema("expected a network or a spline object".into()))
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `samples` equispaced points of `[from, to]`, the last one exactly `to`.
pub fn sample_points(from: f64, to: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![from],
        n => {
            let h = (to - from) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { to } else { from + i as f64 * h })
                .collect()
        }
    }
}

/// `t,value` lines in shortest round-trip notation.
pub fn csv_rows(points: &[(f64, f64)], header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str("t,value\n");
    }
    for (t, v) in points {
        writeln!(out, "{t},{v}").expect("writing to a String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn network_round_trip() {
        let net = ReluNetwork::shallow(vec![1.0, -0.1], vec![0.3, 2.0], vec![1.5, -2.0], 0.25, -1.0).unwrap();
        let text = network_to_json(&net);
        assert_eq!(network_from_json(&text).unwrap(), net);
    }

    #[test]
    fn missing_source_means_zero() {
        let text = r#"{"widths":[1,1,1],"layers":[{"A":[[1]],"b":[0]},{"A":[[2]],"b":[1]}]}"#;
        let net = network_from_json(text).unwrap();
        assert_eq!(net.output().source, vec![0.0]);
    }

    #[test]
    fn schema_and_dimension_errors() {
        assert!(matches!(network_from_json("{"), Err(Error::Schema(_))));
        assert!(matches!(
            network_from_json(r#"{"widths":[1,1,1],"layers":[{"A":[[1]],"b":[0]},{"A":[[2]],"b":[1]}],"x":1}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            network_from_json(r#"{"widths":[1,2,1],"layers":[{"A":[[1]],"b":[0]},{"A":[[2]],"b":[1]}]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            network_from_json(r#"{"widths":[1,1,1],"layers":[{"A":[[1]],"b":[0]},{"A":[[2, 3]],"b":[1]}]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spline_and_hierarchy_round_trip() {
        let s = CplSpline::new(0.1, -0.2, vec![1.0 / 3.0, 2.0], vec![0.7, -1e-3]).unwrap();
        assert_eq!(spline_from_json(&spline_to_json(&s)).unwrap(), s);
        let h = KnotHierarchy::from_flat_three(&(1..=14).map(f64::from).collect::<Vec<_>>(), 2, 2, 2).unwrap();
        assert_eq!(hierarchy_from_json(&hierarchy_to_json(&h)).unwrap(), h);
        assert!(spline_from_json(r#"{"q1":0,"q0":0,"knots":[2,1],"coeffs":[1,1]}"#).is_err());
    }

    #[test]
    fn knots_inputs() {
        assert_eq!(knots_from_json("[1, 2]").unwrap(), KnotsInput::Flat(vec![1.0, 2.0]));
        assert_eq!(
            knots_from_json(r#"{"knots": [3]}"#).unwrap(),
            KnotsInput::Wrapped { knots: vec![3.0] }
        );
        assert!(matches!(
            knots_from_json(r#"{"level1":[0],"level2":[[-1,1]]}"#).unwrap(),
            KnotsInput::Hierarchy(_)
        ));
    }

    #[test]
    fn csv_format() {
        let pts: Vec<(f64, f64)> = sample_points(0.0, 1.0, 2).into_iter().map(|t| (t, t)).collect();
        assert_eq!(csv_rows(&pts, false), "0,0\n1,1\n");
        assert_eq!(csv_rows(&[(0.5, -0.1)], true), "t,value\n0.5,-0.1\n");
        assert_eq!(sample_points(0.0, 11.0, 500).len(), 500);
    }

    #[test]
    fn model_detection() {
        assert!(matches!(model_from_json(r#"{"q1":1,"q0":0,"knots":[],"coeffs":[]}"#).unwrap(), Model::Spline(_)));
        assert!(matches!(model_from_json(r#"{"a":1}"#), Err(Error::Schema(_))));
    }
}
