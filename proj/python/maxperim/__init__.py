"""Monte Carlo perimeters of convex sets and bounds on the maximal perimeter.

The heavy lifting happens in the compiled ``_core`` module. Configurations use
the same JSON layout as the ``maxperim`` command-line tool and may be passed as
dicts.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from . import _core
from ._core import (
    EmptyBodyError,
    InputError,
    NumericalError,
    PreconditionError,
    UnsupportedError,
    fit_exponent,
    gaussian_norm_mean,
    gaussian_tail_integral,
    isotropic_lc_bound,
    lower_bound_constant,
    mills_bound,
    optimal_beta,
    optimized_lower_bound_constant,
    simplex_volume_ratio_constant,
)

__version__ = _core.version()

__all__ = [
    "EmptyBodyError",
    "InputError",
    "NumericalError",
    "PreconditionError",
    "UnsupportedError",
    "bounds_report",
    "fit_exponent",
    "gaussian_norm_mean",
    "gaussian_tail_integral",
    "isotropic_lc_bound",
    "lower_bound_constant",
    "mills_bound",
    "nazarov_scan",
    "optimal_beta",
    "optimized_lower_bound_constant",
    "perimeter",
    "simplex_volume_ratio_constant",
]


def perimeter(config: dict[str, Any]) -> list[dict[str, Any]]:
    """Estimate perimeters; one result dict per job."""
    return json.loads(_core.perimeter_json(json.dumps(config)))


def nazarov_scan(config: dict[str, Any]) -> list[dict[str, Any]]:
    """Random-polytope scan over dimensions; one dict per dimension."""
    return json.loads(_core.nazarov_scan_json(json.dumps(config)))


def bounds_report(config: dict[str, Any]) -> dict[str, Any]:
    """Lower and upper bounds on the maximal perimeter of a measure."""
    return json.loads(_core.bounds_report_json(json.dumps(config)))


def scan_exponent(rows: Iterable[dict[str, Any]], column: str = "empirical_mean") -> dict[str, float]:
    """Log-log slope of ``column`` against n over the successful scan rows."""
    points = [(float(r["n"]), float(r[column])) for r in rows if not r.get("error") and r.get(column)]
    return fit_exponent(points)
