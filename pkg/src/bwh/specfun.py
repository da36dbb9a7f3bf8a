"""Order-0/1 Bessel and Hankel functions and the branch-controlled square root.

Power series are used for ``|z| <= SWITCH`` and the Hankel asymptotic
expansion (optimally truncated) beyond.  Arguments may be complex as long as
they stay near the positive real axis, which is all the solver needs
(``kxz * R`` with a small damping term).
"""
from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError

SWITCH = 12.0
EULER_GAMMA = 0.57721566490153286061
_SERIES_TERMS = 60

# harmonic numbers H_0..H_N and reciprocal factorial products, precomputed once
_k = np.arange(_SERIES_TERMS + 1)
_HARM = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, _SERIES_TERMS + 2))])
_INV_FACT2 = np.array([1.0 / math.factorial(int(k)) ** 2 for k in _k])
_INV_FACT_FACT1 = np.array([1.0 / (math.factorial(int(k)) * math.factorial(int(k) + 1)) for k in _k])


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _series_j0_y0(z):
    """J0 and Y0 by their power series (vectorised)."""
    q = -(z * z) / 4.0
    j0 = np.zeros_like(z)
    tail = np.zeros_like(z)
    term = np.ones_like(z)
    for k in range(_SERIES_TERMS + 1):
        c = term * _INV_FACT2[k]
        j0 = j0 + c
        tail = tail + _HARM[k] * c
        term = term * q
    y0 = (2.0 / np.pi) * ((np.log(z / 2.0) + EULER_GAMMA) * j0 - tail)
    return j0, y0


def _series_j1_y1(z):
    h = z / 2.0
    q = -(h * h)
    j1 = np.zeros_like(z)
    tail = np.zeros_like(z)
    term = h.copy()
    for k in range(_SERIES_TERMS + 1):
        c = term * _INV_FACT_FACT1[k]
        j1 = j1 + c
        tail = tail + (_HARM[k] + _HARM[k + 1]) * c
        term = term * q
    y1 = (2.0 / np.pi) * (np.log(h) + EULER_GAMMA) * j1 - 2.0 / (np.pi * z) - tail / np.pi
    return j1, y1


def _asym_hankel(nu, z, kind):
    """Hankel asymptotic expansion, truncated at its smallest term."""
    mu = 4.0 * nu * nu
    sign = -1.0 if kind == 2 else 1.0
    total = np.ones_like(z)
    term = np.ones_like(z)
    last = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, 80):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z) * (sign * 1j)
        size = np.abs(term)
        active &= size < last
        if not active.any():
            break
        total = np.where(active, total + term, total)
        last = np.where(active, size, last)
        active &= size > 1e-17 * np.abs(total)
    phase = z - (2 * nu + 1) * np.pi / 4.0
    return np.sqrt(2.0 / (np.pi * z)) * np.exp(sign * 1j * phase) * total


def _dispatch(z, series, nu):
    z = _as_complex(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    small = np.abs(z) <= SWITCH
    h2 = np.empty_like(z)
    if small.any():
        j, y = series(z[small])
        h2[small] = j - 1j * y
    big = ~small
    h1 = np.empty_like(z)
    if small.any():
        h1[small] = j + 1j * y
    if big.any():
        h2[big] = _asym_hankel(nu, z[big], 2)
        h1[big] = _asym_hankel(nu, z[big], 1)
    return h1, h2, scalar


def _check_positive(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError(f"{name} requires x > 0")
    return x


def bessel_j0(x):
    """J0 of a real argument (any sign)."""
    x = np.abs(np.asarray(x, dtype=float))
    h1, h2, scalar = _dispatch(np.where(x == 0, 1.0, x), _series_j0_y0, 0)
    out = np.where(np.atleast_1d(x) == 0, 1.0, (0.5 * (h1 + h2)).real)
    return float(out[0]) if scalar else out


def bessel_y0(x):
    x = _check_positive(x, "bessel_y0")
    h1, h2, scalar = _dispatch(x, _series_j0_y0, 0)
    out = (-h2.imag)
    return float(out[0]) if scalar else out


def bessel_j1(x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    h1, h2, scalar = _dispatch(np.where(ax == 0, 1.0, ax), _series_j1_y1, 1)
    out = np.where(np.atleast_1d(ax) == 0, 0.0, h2.real) * np.sign(np.atleast_1d(x) + 0.0)
    out = np.where(np.atleast_1d(x) == 0, 0.0, out)
    return float(out[0]) if scalar else out


def bessel_y1(x):
    x = _check_positive(x, "bessel_y1")
    _, h2, scalar = _dispatch(x, _series_j1_y1, 1)
    out = -h2.imag
    return float(out[0]) if scalar else out


def hankel2_0(z):
    """Hankel function of the second kind, order zero, for near-real ``z``."""
    zc = _as_complex(z)
    if np.any(zc == 0):
        raise DomainError("hankel2_0 has a logarithmic singularity at z = 0")
    _, h2, scalar = _dispatch(zc, _series_j0_y0, 0)
    return complex(h2[0]) if scalar else h2


def hankel2_1(z):
    zc = _as_complex(z)
    if np.any(zc == 0):
        raise DomainError("hankel2_1 is singular at z = 0")
    _, h2, scalar = _dispatch(zc, _series_j1_y1, 1)
    return complex(h2[0]) if scalar else h2


_ROT = np.exp(-0.25j * np.pi)


def kappa_plus(xi, kxz):
    """sqrt(kxz - xi) with its cut running from +kxz straight down to -i*inf."""
    return _ROT * np.sqrt(1j * (kxz - _as_complex(xi)))


def kappa_minus(xi, kxz):
    """sqrt(kxz + xi) with its cut running from -kxz straight up to +i*inf."""
    return _ROT * np.sqrt(1j * (kxz + _as_complex(xi)))


def kappa_branch(xi, kxz):
    """Vertical wavenumber ``sqrt(kxz^2 - xi^2)`` on the decaying branch.

    ``Im kappa <= 0`` on the real axis, so ``exp(-1j*kappa*|z|)`` stays bounded.
    Written as the product of the two half-plane factors, which makes the
    function exactly even in ``xi`` and places the cuts vertically away from
    the real axis.
    """
    xi = _as_complex(xi)
    out = -1j * (np.sqrt(1j * (kxz - xi)) * np.sqrt(1j * (kxz + xi)))
    return complex(out) if out.ndim == 0 else out


def log_kappa_plus(xi, kxz):
    return -0.25j * np.pi + 0.5 * np.log(1j * (kxz - _as_complex(xi)))


def log_kappa_minus(xi, kxz):
    return -0.25j * np.pi + 0.5 * np.log(1j * (kxz + _as_complex(xi)))
