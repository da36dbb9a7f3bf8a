"""Inverse-transform integrals ``int A(xi) exp(-i xi x - i kappa |z|) dxi`` along the real line.

The contour is the real segment ``[-R, R]`` plus two tails leaving it at an
angle into whichever half-plane makes ``exp(-i xi x)`` decay.  With
``loss == 0`` the segment is indented above ``+kxz`` and below ``-kxz`` by
smooth bumps of radius ``0.05 |kxz|``.

Point-independent data (path points, Jacobian, ``kappa`` and the spectral
amplitudes) are memoised per panel so field maps reuse them.
"""
from __future__ import annotations

import math

import numpy as np

from .quadrature import PanelCache, integrate
from .specfun import kappa_branch

TAIL_ANGLES = (math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2)


def _bump(u, centre, radius):
    s = (u - centre) / radius
    inside = np.abs(s) < 1
    shape = np.where(inside, (1 - s * s) ** 2, 0.0)
    dshape = np.where(inside, -4 * s * (1 - s * s) / radius, 0.0)
    return radius * shape, radius * dshape


def tail_angle(x, absz):
    beta = math.atan2(abs(x), absz)
    return min(TAIL_ANGLES, key=lambda a: abs(a - beta))


class SpectralContour:
    """Integration path for one wavenumber ``kxz``; ``amplitude(xi)`` -> (m, n) array."""

    def __init__(self, kxz, amplitude, *, half_width=None, breaks=(), n_initial=24, cache=True):
        self.kxz = complex(kxz)
        self.amplitude = amplitude
        a = abs(self.kxz.real)
        b = max(-self.kxz.imag, 0.0)
        self.R = half_width if half_width is not None else 3.0 * abs(self.kxz)
        self.indent = 0.05 * abs(self.kxz) if b == 0 else 0.0
        feat = max(b, 1e-3 * a)
        pts = {-self.R, self.R, 0.0}
        for p in (a, -a):
            pts.update({p, p - 3 * feat, p + 3 * feat})
        for p in breaks:
            if abs(p) < self.R:
                pts.add(float(p))
        pts.update(np.linspace(-self.R, self.R, n_initial + 1).tolist())
        self.breaks = np.array(sorted(pts))
        self.cache = PanelCache() if cache else None
        self.tail_scale = abs(self.kxz)

    # --- path maps -------------------------------------------------------
    def central_path(self, u):
        xi = u.astype(complex)
        dxi = np.ones_like(xi)
        if self.indent:
            a = self.kxz.real
            up, dup = _bump(u, a, self.indent)
            dn, ddn = _bump(u, -a, self.indent)
            xi = xi + 1j * (up - dn)
            dxi = dxi + 1j * (dup - ddn)
        return xi, dxi

    def tail_path(self, s, side, direction, alpha):
        """side: +1 right / -1 left; direction: -1 into lower, +1 into upper half-plane."""
        t = self.tail_scale * s / (1 - s)
        dt = self.tail_scale / (1 - s) ** 2
        e = np.exp(1j * direction * alpha) if side > 0 else -np.exp(-1j * direction * alpha)
        return side * self.R + e * t, e * dt

    def _cached(self, path):
        def fn(u):
            xi, dxi = path(u)
            kap = kappa_branch(xi, self.kxz)
            amp = np.atleast_2d(self.amplitude(xi))
            return np.vstack([xi[None], dxi[None], np.atleast_1d(kap)[None], amp])
        return fn

    def integrate(self, x, z, *, atol=1e-12, rtol=1e-10, rows=None, multipliers=None,
                  max_panels=6000):
        """Return (values, error, converged) for the amplitude rows at the point (x, z).

        ``multipliers`` is an optional list of callables ``m(xi, kappa)`` applied
        to the chosen rows (used for x/z derivatives).
        """
        absz = abs(z)
        direction = -1 if x >= 0 else 1
        alpha = tail_angle(x, absz)

        def point_fn(u, cached):
            xi, dxi, kap = cached[0], cached[1], cached[2]
            amp = cached[3:] if rows is None else cached[3:][list(rows)]
            kern = np.exp(-1j * xi * x - 1j * kap * absz) * dxi
            vals = amp * kern
            if multipliers is not None:
                vals = np.stack([m(xi, kap) * v for m, v in zip(multipliers, vals)])
            return vals

        total = 0.0
        err = 0.0
        ok = True
        res = integrate(point_fn, self.breaks, cached_fn=self._cached(self.central_path),
                        cache=self.cache, key=("c",), atol=atol, rtol=rtol, max_panels=max_panels)
        total = total + res.value
        err += res.error
        ok &= res.converged
        scale = max(float(np.max(np.abs(res.value))), atol)
        for side in (1, -1):
            path = (lambda s, side=side: self.tail_path(s, side, direction, alpha))
            tr = integrate(point_fn, np.linspace(0.0, 1.0, 5), cached_fn=self._cached(path),
                           cache=self.cache, key=("t", side, direction, alpha),
                           atol=max(atol, rtol * scale) / 4, rtol=0.0, max_panels=max_panels)
            # the left tail is traversed from -inf towards -R
            total = total + (tr.value if side > 0 else -tr.value)
            err += tr.error
            ok &= tr.converged
        return total, err, ok
