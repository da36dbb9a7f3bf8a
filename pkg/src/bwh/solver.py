"""Wiener-Hopf solution for a plane wave hitting the half-plane ``z = 0, x > 0``.

Transform convention: ``F(xi) = (2 pi)^-1/2 int f(x) exp(i xi x) dx`` so that
functions supported on ``x > 0`` are regular in the upper half-plane.  The
scattered field is

    Q(x, z) = (2 pi)^-1/2 int G_side(xi) exp(-i xi x - i kappa |z|) dxi

with ``G_up = S + A`` for ``z > 0`` and ``G_down = S - A`` below.  ``A`` is
half the jump of the field across the plane, ``S = i D / kappa`` where ``D``
is half the jump of the normal derivative.  The conductor condition on
``z = 0+-`` is ``dQ/dx -+ delta dQ/dz = 0``, which leads to the kernel
``1 - xi / (delta kappa)``: the module-level kernel reflected, ``L(-xi)``.
Its factors are therefore ``L(-xi)_+ = L_-(-xi)`` and ``L(-xi)_- = L_+(-xi)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PoleEvaluation, QuadratureFailure, ShadowBoundaryWarning
from .incident import incident_far, incident_far_gradient
from .kernel import FactorizedKernel, KernelSpec, _surface_zero_abscissa, factorize, near_field_halfwidth
from .spectral import SpectralContour
from .specfun import kappa_branch, kappa_minus, kappa_plus

SQRT_2PI = math.sqrt(2 * math.pi)
RESIDUE_NODES = 64
RESIDUE_RADIUS = 1e-3
SHADOW_WIDTH = 0.02


def _side(z):
    """+1 above the plane, -1 below; -0.0 counts as below."""
    return -1 if np.signbit(z) else 1


@dataclass(eq=False)
class SpectralSolution:
    """Everything needed to evaluate the scattered field; immutable once built."""

    kernel: FactorizedKernel
    src: object
    ctx: object
    lt_minus_p: complex
    lt_p: complex
    kappa_m_p: complex
    contour: SpectralContour = field(repr=False, default=None)

    @property
    def pole_location(self) -> complex:
        return -self.src.k1x

    @property
    def kxz(self):
        return self.ctx.kxz

    @property
    def delta(self):
        return self.ctx.delta

    # reflected-kernel factors
    def lt_plus(self, xi):
        return self.kernel.minus(-np.asarray(xi, dtype=complex))

    def lt_minus(self, xi):
        return self.kernel.plus(-np.asarray(xi, dtype=complex))

    def _parts(self, xi):
        """(S, A) without the pole check; vectorised."""
        xi = np.asarray(xi, dtype=complex)
        K, src = self.kxz, self.src
        c = src.amplitude_c
        lp = self.lt_plus(xi)
        den = xi + src.k1x
        if np.isinf(self.delta):
            D = np.zeros_like(xi)
        else:
            D = -src.k1x * c / (SQRT_2PI * self.delta * lp * self.lt_minus_p * den)
        A = 1j * src.k1z * c / (SQRT_2PI * den * self.kappa_m_p * self.lt_minus_p * kappa_plus(xi, K) * lp)
        S = 1j * D / kappa_branch(xi, K)
        return S, A

    def amplitudes(self, xi):
        """Rows ``[G_up, G_down]`` on an array of contour points."""
        S, A = self._parts(xi)
        return np.stack([S + A, S - A])

    def _check_pole(self, xi):
        if np.any(np.isclose(np.asarray(xi, dtype=complex), self.pole_location, rtol=0, atol=1e-14 * abs(self.kxz))):
            raise PoleEvaluation("spectral amplitude evaluated at its pole xi = -k1x")


def solve(ctx, src, kernel: FactorizedKernel | None = None, tol: float = 1e-10) -> SpectralSolution:
    """Assemble the spectral solution (factorising the kernel unless one is given)."""
    if kernel is None:
        kernel = factorize(KernelSpec.from_context(ctx), tol=tol)
    p = -src.k1x
    sol = SpectralSolution(kernel=kernel, src=src, ctx=ctx, lt_minus_p=0j, lt_p=0j, kappa_m_p=0j)
    sol.lt_minus_p = complex(sol.lt_minus(p))
    sol.lt_p = complex(kernel.L(-p))
    sol.kappa_m_p = complex(kappa_minus(p, ctx.kxz))
    K = ctx.kxz
    breaks = []
    for q in (p, _surface_zero_abscissa(K, ctx.delta)):
        if q:
            re, w = np.real(q), max(abs(np.imag(q)), 1e-3 * abs(K))
            breaks += [re - 3 * w, re, re + 3 * w]
    sol.contour = SpectralContour(K, sol.amplitudes, half_width=near_field_halfwidth(K, ctx.delta),
                                  breaks=breaks)
    return sol


def spectral_unknowns(xi, sol: SpectralSolution):
    """Transforms of the field jump and normal-derivative jump across the plane."""
    sol._check_pole(xi)
    S, A = sol._parts(xi)
    D = -1j * kappa_branch(xi, sol.kxz) * S
    return 2 * A, 2 * D


def spectral_G(xi, sol: SpectralSolution, side: int = 1):
    sol._check_pole(xi)
    S, A = sol._parts(xi)
    out = S + A if side > 0 else S - A
    return complex(out) if np.ndim(out) == 0 else out


def saddle_abscissa(x, z, kxz):
    r = math.hypot(x, z)
    return kxz * (x / r) if r > 0 else 0j


def near_shadow_boundary(x, z, sol) -> bool:
    if x == 0 and z == 0:
        return False
    return abs(saddle_abscissa(x, z, sol.kxz) - sol.pole_location) < SHADOW_WIDTH * abs(sol.kxz)


def _integrate(x, z, sol, tol, derivs, warn):
    if warn and near_shadow_boundary(x, z, sol):
        warnings.warn(f"({x:.4g}, {z:.4g}) is within the shadow-boundary band; "
                      "the pole nearly coalesces with the saddle point", ShadowBoundaryWarning, stacklevel=3)
    s = _side(z)
    row = 0 if s > 0 else 1
    atol = tol * abs(sol.src.amplitude_c)
    if derivs:
        mult = [lambda xi, k: 1.0, lambda xi, k: -1j * xi, lambda xi, k: -1j * s * k]
        vals, err, ok = sol.contour.integrate(x, z, atol=atol, rtol=0.0, rows=[row] * 3, multipliers=mult)
    else:
        vals, err, ok = sol.contour.integrate(x, z, atol=atol, rtol=0.0, rows=[row])
    if not ok:
        raise QuadratureFailure(f"scattered-field integral at ({x}, {z}) missed tol (estimate {err:.3g})")
    return np.asarray(vals) / SQRT_2PI, err / SQRT_2PI


def scattered_field(x, z, sol: SpectralSolution, tol: float = 1e-8, warn: bool = True, return_error=False):
    """Scattered field at one point; ``tol`` is absolute, in units of ``|c|``."""
    vals, err = _integrate(float(x), z, sol, tol, False, warn)
    return (complex(vals[0]), err) if return_error else complex(vals[0])


def scattered_gradient(x, z, sol: SpectralSolution, tol: float = 1e-8, warn: bool = True):
    """(Q, dQ/dx, dQ/dz) of the scattered field, derivatives taken under the integral."""
    vals, _ = _integrate(float(x), z, sol, tol, True, warn)
    return complex(vals[0]), complex(vals[1]), complex(vals[2])


def total_gradient(x, z, sol, tol=1e-8, warn=True):
    q, qx, qz = scattered_gradient(x, z, sol, tol, warn)
    gx, gz = incident_far_gradient(x, z, sol.src)
    return q + incident_far(x, z, sol.src), qx + gx, qz + gz


# --- pole (geometric-optics) term --------------------------------------------

def residue_analytic(sol: SpectralSolution, side: int = 1) -> complex:
    """Closed-form residue of ``G_side`` at ``-k1x``."""
    src, K = sol.src, sol.kxz
    p = sol.pole_location
    kap = complex(kappa_branch(p, K))
    d = 0j if np.isinf(sol.delta) else -src.k1x * src.amplitude_c / (SQRT_2PI * sol.delta * sol.lt_p)
    a = 1j * src.k1z * src.amplitude_c / (SQRT_2PI * kap * sol.lt_p)
    s = 1j * d / kap
    return s + a if side > 0 else s - a


def residue_numeric(sol: SpectralSolution, side: int = 1, nodes: int = RESIDUE_NODES,
                    radius: float = RESIDUE_RADIUS) -> complex:
    """Residue from the trapezoid rule on a small circle around the pole."""
    p = sol.pole_location
    rho = radius * abs(sol.kxz)
    w = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    g = sol.amplitudes(p + w)[0 if side > 0 else 1]
    return complex(np.mean(g * w))


def pole_contribution(x, z, sol: SpectralSolution, method: str = "numeric") -> complex:
    """Residue term from closing the inversion contour in the lower half-plane."""
    side = _side(z)
    res = residue_numeric(sol, side) if method == "numeric" else residue_analytic(sol, side)
    p = sol.pole_location
    kp = complex(kappa_branch(p, sol.kxz))
    return complex(-2j * math.pi / SQRT_2PI * res * np.exp(-1j * p * x - 1j * kp * abs(z)))


def reflection_coefficient(sol: SpectralSolution) -> complex:
    """Plane-wave reflection off the underside of an infinite impedance plane."""
    src, d = sol.src, sol.delta
    if np.isinf(d):
        return 1.0 + 0j
    return complex((src.k1x + d * src.k1z) / (d * src.k1z - src.k1x))


def pole_captured(x, z, sol) -> bool:
    """Whether deforming onto the steepest-descent path crosses the pole at (x, z)."""
    r = math.hypot(x, z)
    if r == 0:
        return False
    theta = math.atan2(abs(z), x)
    edge = math.pi + sol.src.phi0
    return theta < edge


def geometric_optics(x, z, sol, method="numeric") -> complex:
    return pole_contribution(x, z, sol, method) if pole_captured(x, z, sol) else 0j


def diffracted_field(x, z, sol, tol=1e-8, warn=True) -> complex:
    return scattered_field(x, z, sol, tol, warn) - geometric_optics(x, z, sol)


# --- transverse components ---------------------------------------------------

def transverse_from_gradient(qx, qz, ctx):
    """(Qx, Qz) from the y-component's in-plane gradient."""
    K2 = ctx.kxz ** 2
    g = ctx.gamma if ctx.wave == 1 else -ctx.gamma
    iky = 1j * ctx.ky
    return (iky * qx - g * qz) / K2, (iky * qz + g * qx) / K2


def transverse_components(x, z, sol, ctx=None, tol=1e-8, include_incident=True):
    ctx = sol.ctx if ctx is None else ctx
    if include_incident:
        _, qx, qz = total_gradient(x, z, sol, tol)
    else:
        _, qx, qz = scattered_gradient(x, z, sol, tol)
    return transverse_from_gradient(qx, qz, ctx)
