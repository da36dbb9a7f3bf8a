"""Far-zone field by the saddle-point method, total-field assembly and field maps.

Observation points are ``(x, z) = (r cos theta, r sin theta)``.  The saddle of
``exp(-i xi x - i kappa |z|)`` sits at ``xi_s = kxz cos |theta|`` and the
leading term of the scattered field is

    coefficient(theta) * sqrt(pi / (2 kxz r)) * exp(-i (kxz r - pi/4)),
    coefficient(theta) = sqrt(2/pi) * kappa(xi_s) * G(xi_s).

Within a few tens of degrees of a shadow boundary the incident pole sits
close to the saddle and the plain expansion converges slowly; see
:func:`far_field` for the refinements.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import wofz

from .exceptions import BWHError, ConfigError, ShadowBoundaryWarning
from .incident import incident_far, source_spec
from .kernel import factorize
from .medium import propagation_context
from .solver import SHADOW_WIDTH, SQRT_2PI, residue_analytic, scattered_field, solve

FD_STEP = 1e-2
FAR_METHODS = ("leading", "two-term", "pole-corrected")


@dataclass
class FarFieldCut:
    theta_samples: np.ndarray
    coefficient: np.ndarray
    field_at_r: np.ndarray
    shadow_flags: np.ndarray
    r: float

    def to_rows(self, degrees=None):
        """CSV rows; pass ``degrees`` to echo configured angles instead of converting back."""
        degs = np.degrees(self.theta_samples) if degrees is None else degrees
        for d, c, f, s in zip(degs, self.coefficient, self.field_at_r, self.shadow_flags):
            yield float(d), c.real, c.imag, abs(c), abs(f), int(bool(s))


def _check_theta(theta):
    if not (-math.pi < theta < math.pi) or theta == 0:
        raise ConfigError(f"observation angle must lie in (-pi, 0) or (0, pi), got {theta!r}")


def shadow_flag(theta, sol) -> bool:
    xs = sol.kxz * math.cos(abs(theta))
    return abs(xs - sol.pole_location) < SHADOW_WIDTH * abs(sol.kxz)


def _w_amplitude(w, sol, side):
    """``kappa * G`` as a function of the angle variable ``xi = kxz cos w``."""
    K = sol.kxz
    w = np.asarray(w, dtype=float)
    g = sol.amplitudes(K * np.cos(w))[0 if side > 0 else 1]
    return K * np.sin(w) * g


def diffraction_coefficient(theta, sol, warn=True) -> complex:
    _check_theta(theta)
    if warn and shadow_flag(theta, sol):
        warnings.warn(f"theta = {math.degrees(theta):.3f} deg lies in a shadow-boundary band",
                      ShadowBoundaryWarning, stacklevel=2)
    side = 1 if theta > 0 else -1
    return complex(math.sqrt(2 / math.pi) * _w_amplitude(abs(theta), sol, side))


def _angle_map(s, theta):
    """w(s) and dw/ds for the map -i cos(w - theta) = -i - s^2."""
    arg = np.arcsin(np.asarray(s, dtype=complex) * np.exp(0.25j * math.pi) / math.sqrt(2))
    w = theta + 2 * arg
    return w, math.sqrt(2) * np.exp(0.25j * math.pi) / np.cos(arg)


def _pole_corrected(r, theta, sol, side):
    """Saddle-point evaluation with the incident pole removed and integrated exactly."""
    K = sol.kxz
    lam = K * r
    t = abs(theta)
    wp = math.pi + sol.src.phi0
    sp = math.sqrt(2) * np.exp(-0.25j * math.pi) * np.sin((wp - t) / 2)
    rs = -residue_analytic(sol, side) / SQRT_2PI

    def h(s):
        w, dw = _angle_map(s, t)
        f = K * np.sin(w) * sol.amplitudes(K * np.cos(w))[0 if side > 0 else 1] * dw / SQRT_2PI
        return f - rs / (s - sp)

    eps = FD_STEP
    hv = h(np.array([-eps, 0.0, eps]))
    h0 = hv[1]
    h2 = (hv[0] - 2 * h0 + hv[2]) / eps ** 2
    regular = np.sqrt(math.pi / lam) * (h0 + h2 / (4 * lam))
    zp = sp * np.sqrt(lam)
    if zp.imag > 0:
        pole = 1j * math.pi * wofz(zp)
    else:
        pole = -1j * math.pi * wofz(-zp)
    return complex(np.exp(-1j * lam) * (regular + rs * pole))


def far_field(r, theta, sol, method: str = "leading", warn=True) -> complex:
    """Diffracted far field at radius ``r``.

    ``method`` is ``"leading"`` (the coefficient formula above), ``"two-term"``
    (next order of the saddle-point series) or ``"pole-corrected"`` (pole
    subtracted and integrated exactly, remainder to second order).  The last
    stays accurate up to and across shadow boundaries, where adding
    :func:`~bwh.solver.geometric_optics` recovers the scattered field.
    """
    if method not in FAR_METHODS:
        raise ConfigError(f"far_field method must be one of {FAR_METHODS}")
    coeff = diffraction_coefficient(theta, sol, warn)
    side = 1 if theta > 0 else -1
    if method == "pole-corrected":
        return _pole_corrected(r, theta, sol, side)
    Kr = sol.kxz * r
    out = coeff * np.sqrt(math.pi / (2 * Kr)) * np.exp(-1j * (Kr - math.pi / 4))
    if method == "two-term":
        t = abs(theta)
        g = _w_amplitude([t - FD_STEP, t, t + FD_STEP], sol, side)
        g2 = (g[0] - 2 * g[1] + g[2]) / FD_STEP ** 2
        out = out * (1 + 1j / Kr * (g2 / (2 * g[1]) + 0.125))
    return complex(out)


def far_cut(thetas, r, sol, method="leading") -> FarFieldCut:
    thetas = np.asarray(thetas, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShadowBoundaryWarning)
        coeff = np.array([diffraction_coefficient(t, sol) for t in thetas], dtype=complex)
        fld = np.array([far_field(r, t, sol, method) for t in thetas], dtype=complex)
    flags = np.array([shadow_flag(t, sol) for t in thetas], dtype=bool)
    return FarFieldCut(thetas, coeff, fld, flags, float(r))


def total_field(x, z, sol, tol=1e-8, warn=True) -> complex:
    return incident_far(x, z, sol.src) + scattered_field(x, z, sol, tol, warn)


def q2_pipeline(m, ky, r0, phi0, loss, tol=1e-10):
    """Solve the right-handed partial-wave problem on its own (kxz -> k2xz, same delta)."""
    ctx2 = propagation_context(m, ky, loss).mirrored()
    return solve(ctx2, source_spec(ctx2, r0=r0, phi0=phi0), tol=tol)


# --- field maps ----------------------------------------------------------------

@dataclass
class FieldGrid:
    x: np.ndarray
    z: np.ndarray
    values: np.ndarray
    converged: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def converged_fraction(self) -> float:
        return float(self.converged.mean()) if self.converged.size else 1.0

    def to_rows(self):
        X, Z = np.meshgrid(self.x, self.z)
        for xv, zv, v, ok in zip(X.ravel(), Z.ravel(), self.values.ravel(), self.converged.ravel()):
            yield xv, zv, v.real, v.imag, abs(v), int(bool(ok))


_WORKER = {}


def _init_worker(ctx, src, tol, kernel_spec=None, kernel_tol=1e-10):
    kernel = None if kernel_spec is None else factorize(kernel_spec, tol=kernel_tol)
    _WORKER["sol"] = solve(ctx, src, kernel=kernel, tol=kernel_tol)
    _WORKER["tol"] = tol


def _point(args):
    x, z, excl = args
    sol = _WORKER["sol"]
    if math.hypot(x, z) < excl or math.hypot(x + sol.src.x0, z + sol.src.z0) < excl:
        return complex("nan+nanj"), False
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShadowBoundaryWarning)
            return total_field(x, z, sol, _WORKER["tol"]), True
    except BWHError:
        return complex("nan+nanj"), False


def field_map(xs, zs, ctx, src, tol=1e-8, workers=1, kernel_spec=None, kernel_tol=1e-10) -> FieldGrid:
    """Total field on the grid ``xs x zs`` (rows follow ``zs``).

    Points within 1e-3 wavelength of the edge or the source are skipped and
    flagged unconverged, as are points whose quadrature fails.  Each worker
    factorises its own kernel, from ``kernel_spec`` when given.
    """
    xs = np.asarray(xs, dtype=float)
    zs = np.asarray(zs, dtype=float)
    excl = 1e-3 * 2 * math.pi / ctx.kxz_lossless
    tasks = [(float(x), float(z), excl) for z in zs for x in xs]
    if not tasks:
        return FieldGrid(xs, zs, np.zeros((zs.size, xs.size), complex), np.zeros((zs.size, xs.size), bool))
    workers = max(1, min(int(workers), os.cpu_count() or 1, len(tasks)))
    if workers == 1:
        _init_worker(ctx, src, tol, kernel_spec, kernel_tol)
        out = [_point(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (8 * workers))
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(ctx, src, tol, kernel_spec, kernel_tol)) as ex:
            out = list(ex.map(_point, tasks, chunksize=chunk))
    vals = np.array([v for v, _ in out], dtype=complex).reshape(zs.size, xs.size)
    ok = np.array([c for _, c in out], dtype=bool).reshape(zs.size, xs.size)
    return FieldGrid(xs, zs, vals, ok)
