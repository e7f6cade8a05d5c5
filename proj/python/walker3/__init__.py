"""Curvature, classification, soliton and geodesic computations for 3D Walker metrics.

The heavy lifting lives in the compiled ``_core`` module; functions here turn
its JSON payloads into plain Python objects.
"""

import json as _json

from ._core import (  # noqa: F401
    DomainError,
    Expr,
    ParseError,
    WalkerError,
    nb_closed_form,
    parse,
    partial,
)
from . import _core

__all__ = [
    "DomainError",
    "Expr",
    "ParseError",
    "WalkerError",
    "blowup_pc",
    "classify",
    "curvature",
    "geodesic",
    "model_match",
    "nb_closed_form",
    "parse",
    "partial",
    "ricci_soliton",
]


def _expr(f):
    return parse(f) if isinstance(f, str) else f


def curvature(f, x, y, order=1, zero_tol=1e-12):
    """R, nabla R, ..., nabla^order R at (x, y) as labelled component tables."""
    return _json.loads(_core.curvature_json(_expr(f), x, y, order, zero_tol))


def classify(f, grid=None):
    """Curvature homogeneity class; grid is (nx, ny, x0, x1, y0, y1)."""
    return _json.loads(_core.classify_json(_expr(f), list(grid or [])))


def model_match(f, x, y):
    return _json.loads(_core.model_match_json(_expr(f), x, y))


def geodesic(f, initial, tmax, tol=1e-10):
    """initial = (x, y, xt, x', y', xt') at t = 0."""
    return _json.loads(_core.geodesic_json(_expr(f), list(initial), tmax, tol))


def blowup_pc(tol=1e-12):
    return _json.loads(_core.blowup_pc_json(tol))


def ricci_soliton(kind, kappa=1.0, alpha="1", beta="0", gamma="0", grid=None):
    return _json.loads(
        _core.ricci_soliton_json(kind, kappa, _expr(alpha), _expr(beta), _expr(gamma), list(grid or []))
    )
