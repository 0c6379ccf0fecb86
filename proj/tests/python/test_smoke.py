import math

import pytest

import maxperim


def test_version():
    assert maxperim.__version__.startswith("0.1.0")


def test_cube_perimeter_is_2n():
    rows = maxperim.perimeter(
        {"samples": 400000, "seed": 3, "measure": {"family": "uniform", "dim": 3}, "body": {"kind": "cube"}}
    )
    assert len(rows) == 1
    row = rows[0]
    assert row["error"] == ""
    assert row["method"] == "facet_shell"
    assert abs(row["value"] - 6.0) < 4 * row["stderr"] + 0.05


def test_halfspace_closed_form():
    (row,) = maxperim.perimeter(
        {"measure": {"family": "gaussian", "dim": 4}, "body": {"kind": "halfspace", "normal": [1, 0, 0, 0], "offset": 1}}
    )
    assert row["method"] == "closed_form"
    assert row["value"] == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi))


def test_scan_and_fit_are_deterministic():
    config = {"dims": [4, 8, 16], "trials": 2, "samples": 20000, "seed": 9}
    a = maxperim.nazarov_scan(config)
    b = maxperim.nazarov_scan(config)
    assert [r["empirical_mean"] for r in a] == [r["empirical_mean"] for r in b]
    assert all(r["empirical_mean"] >= r["analytic_bound"] for r in a)
    fit = maxperim.scan_exponent(a)
    assert 0.0 <= fit["r_squared"] <= 1.0


def test_bounds_report_orders_bounds():
    report = maxperim.bounds_report(
        {"measure": {"family": "gaussian", "dim": 3}, "body": {"kind": "ball", "radius": 1.5}, "samples": 50000}
    )
    assert report["lower"]["value"] <= report["upper"]["value"]
    names = {b["name"] for b in report["bounds_applied"]}
    assert "levelset" in names


def test_constants():
    assert 0.055 <= maxperim.optimized_lower_bound_constant(1e-3) <= 0.065
    assert maxperim.gaussian_tail_integral(2.0) <= maxperim.mills_bound(2.0)
    assert maxperim.fit_exponent([(1, 2), (2, 4), (4, 8)])["slope"] == pytest.approx(1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        maxperim.nazarov_scan({"dims": []})
    with pytest.raises(ValueError):
        maxperim.optimized_lower_bound_constant(1.5)
    with pytest.raises(ValueError):
        maxperim.fit_exponent([(1, 1), (2, 2)])
