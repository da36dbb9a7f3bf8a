"""Vectorised adaptive panel quadrature along parametrised paths.

Each panel is integrated with a 16-point and an 8-point Gauss-Legendre rule;
their difference is the panel error estimate.  Panels are bisected globally
until the summed estimate meets ``max(atol, rtol*|I|)``.  Splitting is
always at the midpoint, so the panel set reachable from a given starting
partition is fixed, and integrand parts that do not depend on the
observation point can be memoised per panel (see :class:`PanelCache`).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import QuadratureFailure

_X16, _W16 = np.polynomial.legendre.leggauss(16)
_X8, _W8 = np.polynomial.legendre.leggauss(8)
_XALL = np.concatenate([_X16, _X8])
N_NODES = _XALL.size


class PanelCache:
    """Memo of point-independent integrand values, keyed by panel endpoints."""

    def __init__(self, max_entries=400_000):
        self._store = {}
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._store)

    def lookup(self, key, panels, fn):
        """Values of ``fn`` at the nodes of every panel, shape (..., n_panels, N_NODES)."""
        out = [None] * len(panels)
        missing = []
        for i, (a, b) in enumerate(panels):
            hit = self._store.get((key, a, b))
            if hit is None:
                missing.append(i)
            else:
                out[i] = hit
        self.hits += len(panels) - len(missing)
        self.misses += len(missing)
        if missing:
            u = panel_nodes([panels[i] for i in missing])
            values = np.asarray(fn(u.ravel()))
            values = values.reshape(values.shape[:-1] + u.shape)
            for j, i in enumerate(missing):
                v = values[..., j, :].copy()
                out[i] = v
                if len(self._store) < self.max_entries:
                    self._store[(key, *panels[i])] = v
        return np.stack(out, axis=-2)


def panel_nodes(panels):
    p = np.asarray(panels, dtype=float).reshape(-1, 2)
    mid = 0.5 * (p[:, 0] + p[:, 1])
    half = 0.5 * (p[:, 1] - p[:, 0])
    return mid[:, None] + half[:, None] * _XALL[None, :]


@dataclass
class QuadResult:
    value: complex | np.ndarray
    error: float
    converged: bool
    n_panels: int


def integrate(point_fn, breakpoints, *, cached_fn=None, cache=None, key=None,
              atol=1e-12, rtol=1e-10, max_panels=6000, raise_on_failure=False):
    """Integrate over ``[breakpoints[0], breakpoints[-1]]`` in the path parameter.

    ``point_fn(u, cached)`` returns integrand values (already multiplied by the
    path Jacobian) with shape ``(..., u.size)``; ``cached`` is the output of
    ``cached_fn(u)`` or ``None``.
    """
    bp = np.asarray(breakpoints, dtype=float)
    leaves = [(float(bp[i]), float(bp[i + 1])) for i in range(bp.size - 1) if bp[i + 1] > bp[i]]
    if not leaves:
        return QuadResult(0.0, 0.0, True, 0)
    total_len = bp[-1] - bp[0]
    done_q = 0.0
    done_err = 0.0
    done_len = 0.0
    n_done = 0
    while True:
        u = panel_nodes(leaves)
        if cached_fn is not None:
            if cache is not None:
                cvals = cache.lookup(key, leaves, cached_fn)
            else:
                cvals = np.asarray(cached_fn(u.ravel()))
                cvals = cvals.reshape(cvals.shape[:-1] + u.shape)
        else:
            cvals = None
        vals = np.asarray(point_fn(u, cvals))
        half = 0.5 * np.array([b - a for a, b in leaves])
        q16 = (vals[..., :16] @ _W16) * half
        q8 = (vals[..., 16:] @ _W8) * half
        err = np.abs(q16 - q8)
        if err.ndim > 1:
            err = err.max(axis=tuple(range(err.ndim - 1)))
        if not np.all(np.isfinite(err)):
            raise QuadratureFailure("non-finite integrand encountered")
        est = done_q + q16.sum(axis=-1)
        total_err = done_err + err.sum()
        target = max(atol, rtol * float(np.max(np.abs(est))))
        if total_err <= target:
            return QuadResult(est, float(total_err), True, n_done + len(leaves))
        # panels already below their share of the budget are retired
        share = target * half * 2 / total_len
        good = err <= 0.5 * share
        if good.all():
            good[np.argmax(err / share)] = False
        if n_done + len(leaves) + int((~good).sum()) > max_panels:
            if raise_on_failure:
                raise QuadratureFailure(
                    f"quadrature did not reach {target:.3g} (estimate {total_err:.3g}) within {max_panels} panels")
            return QuadResult(est, float(total_err), False, n_done + len(leaves))
        done_q = done_q + q16[..., good].sum(axis=-1)
        done_err += err[good].sum()
        n_done += int(good.sum())
        new = []
        for keep, (a, b) in zip(good, leaves):
            if not keep:
                m = 0.5 * (a + b)
                new.append((a, m))
                new.append((m, b))
        leaves = new


def composite_gauss(breaks, order=16):
    """Nodes and weights of a composite Gauss-Legendre rule on ``breaks``."""
    x, w = np.polynomial.legendre.leggauss(order)
    b = np.asarray(breaks, dtype=float)
    mid = 0.5 * (b[1:] + b[:-1])
    half = 0.5 * (b[1:] - b[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
