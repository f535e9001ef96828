"""One-dimensional Gauss-Legendre quadrature with adaptive bisection."""

from __future__ import annotations

import functools

import numpy as np

from .errors import AccuracyError

__all__ = ["gauss_legendre", "fixed_panels", "adaptive"]


@functools.lru_cache(maxsize=None)
def gauss_legendre(npts: int):
    """Nodes and weights on [-1, 1] (cached)."""
    x, w = np.polynomial.legendre.leggauss(npts)
    return x, w


def _panel(f, a: float, b: float, npts: int) -> float:
    x, w = gauss_legendre(npts)
    half = 0.5 * (b - a)
    nodes = a + half * (x + 1.0)
    return half * float(np.dot(w, f(nodes)))


def fixed_panels(f, edges, npts: int = 16) -> float:
    """Composite Gauss-Legendre over consecutive panels given by `edges`."""
    edges = np.asarray(edges, dtype=float)
    return sum(_panel(f, a, b, npts) for a, b in zip(edges[:-1], edges[1:]))


def adaptive(f, edges, tol: float, max_depth: int = 48, npts: int = 15):
    """Adaptively bisected Gauss-Legendre over the initial panels `edges`.

    Returns (value, error_estimate).  Raises AccuracyError when a panel
    hits max_depth with its local budget unmet.
    """
    edges = np.asarray(edges, dtype=float)
    npanels = max(len(edges) - 1, 1)
    total = 0.0
    est = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _adaptive_panel(f, a, b, _panel(f, a, b, npts), tol / npanels, max_depth, npts)
        total += v
        est += e
    return total, est


def _adaptive_panel(f, a, b, whole, tol, depth, npts):
    mid = 0.5 * (a + b)
    left = _panel(f, a, mid, npts)
    right = _panel(f, mid, b, npts)
    err = abs(left + right - whole)
    # the roundoff floor stops recursion once the split test is pure noise
    floor = 4e-16 * (abs(left) + abs(right)) + 1e-300
    if err <= max(tol, floor) or b - a < 1e-15 * max(1.0, abs(a) + abs(b)):
        return left + right, err
    if depth <= 0:
        raise AccuracyError(
            f"adaptive quadrature stalled on [{a}, {b}] with estimate {err:.3e}",
            value=left + right,
            estimate=err,
            tolerance=tol,
        )
    vl, el = _adaptive_panel(f, a, mid, left, tol / 2, depth - 1, npts)
    vr, er = _adaptive_panel(f, mid, b, right, tol / 2, depth - 1, npts)
    return vl + vr, el + er
