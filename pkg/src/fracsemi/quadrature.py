"""Panel-based Gauss-Legendre quadrature helpers.

All improper integrals in this package are reduced to integrals over a
finite window, usually after the substitution u = exp(w).  The helpers
here integrate smooth integrands over such windows with composite
Gauss-Legendre panels; callers remain responsible for choosing the
window so the omitted tails are below their error budget.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(a: float, b: float, panel_width: float = 0.5, order: int = 12):
    """Nodes and weights of composite Gauss-Legendre panels on [a, b].

    Returns (nodes, weights) as flat arrays.  Panel count is chosen so no
    panel is wider than panel_width.
    """
    if not b > a:
        raise ValueError("empty integration window")
    n_panels = max(1, int(np.ceil((b - a) / panel_width)))
    edges = np.linspace(a, b, n_panels + 1)
    x, w = _gl_nodes(order)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_panels(f, a: float, b: float, panel_width: float = 0.5, order: int = 12):
    """Integrate a vectorized callable over [a, b] with GL panels."""
    nodes, weights = panel_nodes(a, b, panel_width, order)
    vals = np.asarray(f(nodes))
    return vals @ weights if vals.ndim == 1 else np.tensordot(weights, vals, axes=(0, 0))


def log_panel_nodes(u_min: float, u_max: float, panel_width: float = 0.5, order: int = 12):
    """Nodes/weights for integrals over u in [u_min, u_max] via u = exp(w).

    Returned weights already include the Jacobian u, so
    sum(f(nodes) * weights) approximates the integral of f du.
    """
    if not (u_min > 0 and u_max > u_min):
        raise ValueError("log panels need 0 < u_min < u_max")
    w_nodes, w_weights = panel_nodes(np.log(u_min), np.log(u_max), panel_width, order)
    u = np.exp(w_nodes)
    return u, w_weights * u


def worker_count() -> int:
    """Thread cap for grid sweeps, from FRACSEMI_THREADS (default 1)."""
    raw = os.environ.get("FRACSEMI_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map preserving input order; threads only when FRACSEMI_THREADS > 1."""
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
