"""CMC-1 surfaces in hyperbolic 3-space: catalog, normalization, meshes and checks."""

import json as _json

from ._cmcforge import (
    Inadmissible,
    UnknownSurface,
    alpha_of_c,
    c_range,
    catalog_names,
    exists_cmc,
    genus0_ends,
    lambda_of_c,
    mesh,
    monodromy,
    numeric_ta,
    theta_of_c,
    total_abs_curvature,
)
from . import _cmcforge


def catalog(name):
    """Weierstrass data of a catalog surface as a dict."""
    return _json.loads(_cmcforge._catalog_json(name))


def solve(surface, c, tol=1e-12):
    """Run report of the period killing solver."""
    return _json.loads(_cmcforge._solve_json(surface, c, tol))


def platonic_table():
    return _json.loads(_cmcforge._table_json())


def verify(suite="all"):
    """Results of the invariant suites, one dict per suite."""
    return _json.loads(_cmcforge._verify_json(str(suite)))


__all__ = [
    "Inadmissible", "UnknownSurface", "alpha_of_c", "c_range", "catalog", "catalog_names", "exists_cmc",
    "genus0_ends", "lambda_of_c", "mesh", "monodromy", "numeric_ta", "platonic_table", "solve",
    "theta_of_c", "total_abs_curvature", "verify",
]
