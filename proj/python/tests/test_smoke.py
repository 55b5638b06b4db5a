import json
import math

import numpy as np
import pytest

import finslerkit as fk


def test_catalog_and_norm():
    e = fk.catalog("euclidean", 2)
    assert e.dim == 2 and e.kind == "riemannian"
    assert e.F([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
    np.testing.assert_allclose(e.g([0.1, 0.2], [1.0, 0.0]), np.eye(2), atol=1e-15)
    assert "funk" in fk.catalog_names()
    s = fk.catalog("sphere", 2, {"kappa": 4.0})
    assert fk.flag_curvature(s, [0.1, 0.1], [1.0, 0.0], [0.0, 1.0]) == pytest.approx(4.0, abs=1e-9)


def test_geometry_arrays():
    f = fk.catalog("funk", 3)
    geo = fk.geometry(f, [0.1, -0.2, 0.3], [1.0, 0.5, -0.2])
    assert geo["chern"].shape == (3, 3, 3, 3)
    assert geo["ricci"] / geo["F"] ** 2 == pytest.approx(-0.5, abs=1e-9)
    np.testing.assert_allclose(geo["spray"], 0.5 * geo["F"] * np.array([1.0, 0.5, -0.2]), atol=1e-13)


def test_reports():
    rep = fk.integrability_report(fk.catalog("sphere", 3), samples=10)
    assert all(rep["verdicts"].values())
    assert rep["sup_B"] is None
    inv = fk.invariant_suite(fk.catalog("perturbed-randers", 3), samples=5)
    assert all(v["pass"] for v in inv.values())
    assert fk.mobius_residual(fk.catalog("euclidean", 2), "log(2/(1 + x1^2 + x2^2))") < 1e-6
    assert fk.schwarzian_1d("tan(2*x1)", 0.3) == pytest.approx(8.0, rel=1e-9)


def test_dynamics():
    s = fk.catalog("sphere", 2)
    d = fk.conjugate_distance(s, [0.3, 0.0], [0.0, 1.0], 4.0)
    assert d == pytest.approx(math.pi, abs=1e-6)
    pp = fk.projective_parameter(s, [0.3, 0.0], [0.0, 1.0], 1.4)
    np.testing.assert_allclose(pp["p"], np.tan(pp["s"]), rtol=1e-6)
    assert pp["schwarzian_residual"] < 1e-6
    flat = fk.bonnet(fk.catalog("flat", 2), 1.0, geodesics=2)
    assert flat["hypothesis_violated"] is True


def test_projective_factor_and_errors():
    x, y = [0.2, -0.3], [0.5, 1.0]
    p = fk.projective_factor(fk.catalog("euclidean", 2), fk.catalog("funk", 2), x, y)
    assert p == pytest.approx(0.5 * fk.catalog("funk", 2).F(x, y), rel=1e-12)
    with pytest.raises(ValueError):
        fk.catalog("nosuch", 2)
    with pytest.raises(ValueError):
        fk.catalog("hyperbolic", 2).F([0.9, 0.9], [1.0, 0.0])


def test_cli_roundtrip():
    code, out, _ = fk.run_cli(["tensors", "--metric", "sphere", "--x", "0.1,0.2", "--y", "1,0", "--flag", "0,1"])
    assert code == 0
    assert json.loads(out)["flag_curvature"] == pytest.approx(1.0, abs=1e-5)
    code, _, err = fk.run_cli(["tensors", "--metric", "nosuch"])
    assert code == 1 and "unknown metric" in err
