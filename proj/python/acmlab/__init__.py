"""Almost contact metric structures on frame models.

Thin wrapper over the C++ core. Reports come back as parsed JSON; model
specs are JSON strings in the same format the command-line tool reads.
"""

import json

from ._core import ValidationError, catalog_names, identity_ids, parse_params, random_spec
from ._core import analyze as _analyze
from ._core import catalog_spec as _catalog_spec
from ._core import minimize_bending as _minimize_bending
from ._core import report as _report

__all__ = [
    "ValidationError",
    "analyze",
    "catalog_names",
    "catalog_spec",
    "classify",
    "identity_ids",
    "minimize_bending",
    "parse_params",
    "random_spec",
    "verify",
]


def _params(params):
    if params is None:
        return {}
    if isinstance(params, str):
        return parse_params(params)
    return {k: float(v) for k, v in params.items()}


def catalog_spec(name, params=None):
    """Catalog model as a JSON spec string."""
    return _catalog_spec(name, _params(params))


def analyze(catalog=None, params=None, spec=None, tol=1e-9):
    """Torsion (numpy arrays in the normalized frame), type and harmonicity verdicts."""
    return _analyze(catalog=catalog, params=_params(params), spec=spec, tol=tol)


def minimize_bending(catalog=None, params=None, spec=None, seed=None, max_iters=200):
    """Bending flow from the model's structure, or from a seeded random one."""
    return _minimize_bending(catalog=catalog, params=_params(params), spec=spec, seed=seed, max_iters=max_iters)


def classify(catalog=None, params=None, spec=None, tol=1e-9, identities=False, flow=False):
    """Classify one model; returns the report as a dict."""
    return json.loads(
        _report("classify", catalog=catalog, params=_params(params), spec=spec, tol=tol,
                identities=identities, flow=flow))


def verify(catalog=None, params=None, spec=None, random=0, seed=0, tol=1e-9, flow=False):
    """Identity suite and module invariants; returns the report as a dict."""
    return json.loads(
        _report("verify", catalog=catalog, params=_params(params), spec=spec, random=random, seed=seed,
                tol=tol, flow=flow))
