use pyo3::prelude::*;
use reluspline_py::reluspline_module;

#[test]
fn module_round_trip_in_embedded_interpreter() {
    pyo3::append_to_inittab!(reluspline_module);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            c"
import reluspline as rs
s = rs.CplSpline.canonical(0.5, -1.0, [2.0, 1.0, 2.0], [1.0, -3.0, 0.5])
assert s.knots == [1.0, 2.0] and s.coeffs == [-3.0, 1.5]
net = rs.spline_to_shallow(s)
assert rs.dnn_to_spline(net) == s
assert rs.audit_bound(net) == (2, 2, True)
h = rs.KnotHierarchy.from_flat_two([-2.0, -1.0, 0.0, 1.0, 2.0], 1, 2)
assert len(rs.active_knots(rs.dnn_to_spline(rs.synth_two_hidden(h)))) == 5
try:
    rs.Tolerances(zero=-1.0)
    raise SystemExit('negative tolerance accepted')
except rs.ReluSplineError:
    pass
",
            None,
            None,
        )
        .unwrap();
    });
}
