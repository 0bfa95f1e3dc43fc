import math

import numpy as np
import pytest

import edgebrane as eb


def test_catalog_names_build():
    for name in eb.catalog_names():
        assert eb.entry(name).id.startswith(name)


def test_helicoid_is_extremal_and_satisfies_edge_law():
    h = eb.entry("helicoid:omega=0.5,R=1")
    xi = 0.5 * (h.lower + h.upper)
    assert np.max(np.abs(h.mean_curvature(xi))) < 1e-9
    assert h.extrinsic_curvature(xi).shape == (2, 2, 1)
    for b in range(h.boundary_count):
        assert abs(h.edge_residual(b, np.array([0.3]))) < 1e-9
        assert np.linalg.norm(h.boundary_condition_residual(b, np.array([0.3]))) < 1e-9


def test_sphere_metric_and_integrability():
    s = eb.entry("sphere")
    xi = np.array([1.0, 0.5])
    g = s.induced_metric(xi)
    assert g == pytest.approx(np.diag([4.0, 4.0 * math.sin(1.0) ** 2]))
    r = s.integrability_residuals(xi)
    assert r["ricci"] is None
    assert max(r["gauss"], r["codazzi"]) < 1e-6


def test_expectations_hold():
    e = eb.entry("hole:rho=2,mub=2")
    for ex in e.expected:
        assert abs(e.measure(ex.quantity, ex.value) - ex.value) <= ex.tolerance, ex.quantity


def test_invalid_parameters_raise_value_error():
    with pytest.raises(ValueError):
        eb.entry("helicoid:omega=0.9,R=1.2")


def test_flat_strip_action():
    assert eb.entry("plane").action(4) == pytest.approx(-1.0 * np.prod(
        eb.entry("plane").upper - eb.entry("plane").lower), rel=1e-12)


def test_orbit_relation():
    w = eb.rotating_orbit_omega(1.0, 3.0, 1.0)
    assert w == pytest.approx(0.5, rel=1e-13)
    assert 1.0 - eb.rotating_orbit_omega(1e6, 1.0, 1.0) < 1e-6


def test_collapse_run_matches_closed_form():
    c = eb.SimulationConfig()
    c.grid_points = 100
    c.duration = 0.8
    c.initial_data = "collapsing_string:a=1,x0=1"
    out = eb.evolve(c)
    assert out["event"] == "none"
    t, x = out["right"][:, 0], np.abs(out["right"][:, 1])
    exact = 1.0 - (np.sqrt(1.0 + t**2) - 1.0)
    assert np.max(np.abs(x - exact) / exact) < 1e-3
    assert out["constraint"].max() < 1e-3


def test_config_validation():
    c = eb.SimulationConfig()
    c.grid_points = 4
    with pytest.raises(ValueError):
        c.validate()
