"""Line-source incident field: exact Hankel form, spectral integral, plane-wave limit.

The source sits at ``(-x0, -z0) = (r0 cos phi0, r0 sin phi0)``.  The exact field
is ``-(i/4) H0^(2)(kxz R)``.  Far from the source it reduces to the plane wave
``c exp(i (k1x x + k1z z))``.

The amplitude ``c`` uses the undamped wavenumber: the damping in ``kxz`` is a
quadrature device and must not attenuate the source over the (large) distance
``r0``.  ``k1x`` and ``k1z`` do carry the damping so the incident pole stays
off the real axis.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, QuadratureFailure, SourcePointSingularity
from .spectral import SpectralContour
from .specfun import hankel2_0


@dataclass(frozen=True)
class SourceSpec:
    x0: float
    z0: float
    r0: float
    phi0: float
    amplitude_c: complex
    k1x: complex
    k1z: complex

    def scaled(self, factor) -> "SourceSpec":
        """Same source geometry with the plane-wave amplitude multiplied by ``factor``."""
        return SourceSpec(self.x0, self.z0, self.r0, self.phi0, self.amplitude_c * factor, self.k1x, self.k1z)


def plane_wave_amplitude(k: float, r0: float) -> complex:
    return -0.25j * math.sqrt(2.0 / (math.pi * k * r0)) * np.exp(-1j * (k * r0 - math.pi / 4))


def source_spec(ctx, r0=None, phi0=None, x0=None, z0=None) -> SourceSpec:
    """Build a :class:`SourceSpec` from polar ``(r0, phi0)`` or Cartesian ``(x0, z0)``."""
    polar = r0 is not None or phi0 is not None
    cart = x0 is not None or z0 is not None
    if polar == cart:
        raise ConfigError("give the source either as (r0, phi0) or as (x0, z0), not both")
    if polar:
        if r0 is None or phi0 is None:
            raise ConfigError("polar source needs both r0 and phi0")
        x0 = -r0 * math.cos(phi0)
        z0 = -r0 * math.sin(phi0)
    else:
        if x0 is None or z0 is None:
            raise ConfigError("cartesian source needs both x0 and z0")
        r0 = math.hypot(x0, z0)
        phi0 = math.atan2(-z0, -x0)
    if r0 <= 0:
        raise ConfigError("source radius must be positive")
    if not (-math.pi < phi0 < -math.pi / 2):
        warnings.warn(f"phi0 = {phi0:.4f} rad lies outside (-pi, -pi/2); the half-plane is not "
                      "illuminated from below-left as the formulation assumes", stacklevel=2)
    k = ctx.kxz
    return SourceSpec(x0=float(x0), z0=float(z0), r0=float(r0), phi0=float(phi0),
                      amplitude_c=complex(plane_wave_amplitude(k.real, r0)),
                      k1x=complex(k * math.cos(phi0)), k1z=complex(k * math.sin(phi0)))


def _distance(x, z, src):
    return np.hypot(np.asarray(x, dtype=float) + src.x0, np.asarray(z, dtype=float) + src.z0)


def incident_exact(x, z, src: SourceSpec, ctx):
    R = _distance(x, z, src)
    if np.any(R == 0):
        raise SourcePointSingularity("observation point coincides with the line source")
    out = -0.25j * hankel2_0(ctx.kxz * R)
    return complex(out) if np.ndim(out) == 0 else out


def incident_far(x, z, src: SourceSpec, ctx=None):
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    out = src.amplitude_c * np.exp(1j * (src.k1x * x + src.k1z * z))
    return complex(out) if out.ndim == 0 else out


def incident_far_gradient(x, z, src: SourceSpec):
    """(d/dx, d/dz) of :func:`incident_far`."""
    q = incident_far(x, z, src)
    return 1j * src.k1x * q, 1j * src.k1z * q


def _inverse_kappa(kxz):
    from .specfun import kappa_branch

    def amp(xi):
        return 1.0 / kappa_branch(xi, kxz)
    return amp


class IncidentSpectral:
    """Spectral (plane-wave superposition) form of the incident field.

    Integrates ``(1/(4 pi i)) int exp(-i xi X - i kappa |Z|) / kappa dxi``
    with ``X = x + x0``, ``Z = z + z0``.  The overall sign is the one that
    reproduces :func:`incident_exact`.
    """

    def __init__(self, ctx, tol=1e-10):
        self.ctx = ctx
        self.tol = tol
        self.contour = SpectralContour(ctx.kxz, _inverse_kappa(ctx.kxz))

    def __call__(self, x, z, src: SourceSpec, raise_on_failure=True):
        X = float(x) + src.x0
        Z = float(z) + src.z0
        if X == 0 and Z == 0:
            raise SourcePointSingularity("observation point coincides with the line source")
        val, err, ok = self.contour.integrate(X, Z, atol=1e-15, rtol=self.tol)
        if not ok and raise_on_failure:
            raise QuadratureFailure(f"incident spectral integral did not converge (err {err:.3g})")
        return complex(val[0]) / (4j * math.pi)


def incident_spectral(x, z, src: SourceSpec, ctx, tol=1e-10):
    return IncidentSpectral(ctx, tol)(x, z, src)
