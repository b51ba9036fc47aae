//! Exact conversion between scalar ReLU networks with source channels and
//! continuous piecewise-linear splines, plus synthesis of networks whose
//! breakpoints are prescribed.

pub mod analysis;
pub mod bundle;
pub mod error;
pub mod eval;
pub mod hierarchy;
pub mod io;
pub mod network;
pub mod normalize;
pub mod spline;
pub mod synth;
pub mod tol;
pub mod transfer;

pub use analysis::{active_knots, audit_bound, coeffs_from_knots, BoundReport, ClosedFormCoeffs};
pub use bundle::SplineBundle;
pub use error::{Error, Result};
pub use eval::{equivalence_error, eval_network, eval_spline, probe_grid};
pub use hierarchy::KnotHierarchy;
pub use network::{knot_bound, InputLayer, Layer, ReluNetwork};
pub use normalize::{is_normalized, positive_scale_normalize};
pub use spline::{relu, CplSpline, PiecewiseForm};
pub use synth::{
    epsilon_select, redundancy_residual, slopes_from_knots, synth_three_hidden, synth_two_hidden,
    synth_two_hidden_no_source, weights_from_slopes, KnotProbe, SynthesisOptions,
};
pub use tol::Tolerances;
pub use transfer::{
    dnn_to_spline, first_layer_canonicalize, layer_transfer, shallow_to_spline, sigma_compose,
    spline_to_shallow, FirstLayerForm,
};
