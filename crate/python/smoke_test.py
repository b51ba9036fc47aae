"""Smoke test for the reluspline extension module.

Build and install with `pip install --no-build-isolation crates/python`, then run
`python3 python/smoke_test.py` from the repository root.
"""

import math
from pathlib import Path

import reluspline as rs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def close(a, b, eps=1e-9):
    return all(math.isclose(x, y, abs_tol=eps) for x, y in zip(a, b)) and len(a) == len(b)


def main():
    net = rs.ReluNetwork.from_json((FIXTURES / "maximal15_network.json").read_text())
    s = rs.dnn_to_spline(net)
    assert len(s) == 15, s
    grid = rs.probe_grid(s.knots)
    assert rs.equivalence_error(net, s, grid) <= 1e-12
    assert rs.audit_bound(net) == (15, 15, True)
    assert all(abs(net(t) - s(t)) <= 1e-12 for t in grid)

    n = rs.positive_scale_normalize(net)
    assert rs.is_normalized(n) and not rs.is_normalized(net)
    assert n.sources[0] == [1.0, 1.0, -1.0]

    h = rs.KnotHierarchy.from_flat_three([float(k) for k in range(1, 15)], 2, 2, 2)
    deep = rs.synth_three_hidden(h, eps=[1.0, -1.0], a4=[-1.0, 1.0])
    ds = rs.dnn_to_spline(deep)
    assert (ds.q1, ds.q0) == (-1.0, 2.0)
    assert close(ds.knots, [float(k) for k in range(1, 15)] + [431 / 29])
    assert math.isclose(ds.coeffs[-1], -29.0, abs_tol=1e-9)

    flat = rs.synth_two_hidden_no_source([float(k) for k in range(1, 10)], 3, 2, seeds=[-1.0, 1.0])
    assert flat.weights[1] == [[-1.0, 3.0, -6.0], [1.0, -1.5, 0.75]]
    assert [k for k, _ in rs.active_knots(rs.dnn_to_spline(flat))] == [float(k) for k in range(1, 10)]

    shallow = rs.spline_to_shallow(s)
    assert shallow.widths == [1, 15, 1]
    assert rs.dnn_to_spline(shallow) == s

    r = rs.sigma_compose(rs.CplSpline(1.0, -1.0))
    assert r.knots == [1.0] and r.coeffs == [1.0]

    assert rs.CplSpline.from_json(s.to_json()) == s
    assert rs.knot_bound([1, 2, 2, 2, 1]) == 26

    two = rs.KnotHierarchy([0.0], [[-1.0, 1.0], [-2.0, 2.0]])
    assert len(rs.active_knots(rs.dnn_to_spline(rs.synth_two_hidden(two)))) == 5

    try:
        rs.CplSpline(0.0, 0.0, [2.0, 1.0], [1.0, 1.0])
    except rs.ReluSplineError:
        pass
    else:
        raise AssertionError("unsorted knots accepted")
    try:
        rs.KnotHierarchy([0.0], [[-1.0, -0.5]])
    except ValueError as e:
        assert "interlaced" in str(e)
    else:
        raise AssertionError("interlacing violation accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
