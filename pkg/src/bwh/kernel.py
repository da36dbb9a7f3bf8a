"""Wiener-Hopf kernel ``L(xi) = 1 + xi / (kappa(xi) * delta)`` and its numerical split.

The kernel tends to two different constants ``1 +/- i/delta`` as
``xi -> +/-inf``.  It is normalised by the explicitly split function

    e^C * (kappa_p / kappa_m)^nu,   kappa_p = sqrt(k - xi),  kappa_m = sqrt(k + xi)

whose logarithm tends to ``C -/+ i*pi*nu/2`` at ``+/-inf``; ``C`` and ``nu``
are chosen so that the remainder ``L0`` tends to 1 at both ends.  ``log L0``
is then split by Cauchy integrals over two lines ``Im t = -w`` (for the
plus factor) and ``Im t = +w`` (for the minus factor) inside the strip
``|Im xi| < -Im k`` where everything is analytic.  Finally

    L+ = e^{C/2} kappa_p^nu  exp(F+),     L- = e^{C/2} kappa_m^-nu  exp(F-).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    BranchPointSingularity,
    ConfigError,
    KernelZeroOnContour,
    ToleranceNotMet,
)
from .quadrature import composite_gauss
from .specfun import kappa_branch, log_kappa_minus, log_kappa_plus

_CHUNK = 48


def _kernel(xi, kxz, delta):
    xi = np.asarray(xi, dtype=complex)
    if np.isinf(delta):
        return np.ones_like(xi)
    return 1.0 + xi / (kappa_branch(xi, kxz) * delta)


def kernel_L(xi, ctx):
    """Evaluate the kernel for a :class:`~bwh.medium.PropagationContext` (or KernelSpec)."""
    kxz = ctx.kxz
    xi_arr = np.asarray(xi, dtype=complex)
    if np.any(xi_arr * xi_arr - kxz * kxz == 0):
        raise BranchPointSingularity("kernel evaluated at a branch point +/- kxz")
    out = _kernel(xi_arr, kxz, ctx.delta)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelSpec:
    kxz: complex
    delta: complex
    strip_halfwidth: float | None = None
    node_budget: int = 400_000

    def __post_init__(self):
        b = -self.kxz.imag
        if b <= 0:
            raise ConfigError("factorization needs loss > 0 (Im kxz < 0) to open an analyticity strip")
        w = 0.5 * b if self.strip_halfwidth is None else self.strip_halfwidth
        if not 0 < w < b:
            raise ConfigError(f"strip_halfwidth must lie in (0, {b:.6g}), got {w!r}")
        object.__setattr__(self, "strip_halfwidth", float(w))

    @classmethod
    def from_context(cls, ctx, strip_halfwidth=None, node_budget=400_000):
        return cls(kxz=complex(ctx.kxz), delta=complex(ctx.delta),
                   strip_halfwidth=strip_halfwidth, node_budget=node_budget)


def _line_breaks(near, step, w, far_scale, t_max):
    """Uniform panels on [-near, near], geometrically growing panels beyond."""
    n = max(1, int(math.ceil(2 * near / step)))
    inner = np.linspace(-near, near, n + 1)
    outer = []
    t = near
    while t < t_max:
        t = t + 2.0 * (w + 0.35 * (t - near)) * far_scale
        outer.append(min(t, t_max))
    outer = np.asarray(outer)
    return np.concatenate([-outer[::-1], inner, outer])


@dataclass
class FactorizedKernel:
    """Samplers for ``L+`` (regular above the strip) and ``L-`` (regular below)."""

    spec: KernelSpec
    nu: complex
    log_c: complex
    nodes: np.ndarray
    weights: np.ndarray
    f_lo: np.ndarray
    f_hi: np.ndarray
    product_error: float = float("nan")
    trivial: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return 2 * self.nodes.size

    @property
    def kxz(self):
        return self.spec.kxz

    @property
    def w(self):
        return self.spec.strip_halfwidth

    def L(self, xi):
        return _kernel(xi, self.spec.kxz, self.spec.delta)

    def _remainder_at(self, xi, fvals):
        """log L0 at points inside the strip, on the branch of the nearby line samples."""
        f = (np.log(self.L(xi)) - self.log_c
             - self.nu * (log_kappa_plus(xi, self.kxz) - log_kappa_minus(xi, self.kxz)))
        idx = np.clip(np.searchsorted(self.nodes, xi.real), 0, self.nodes.size - 1)
        turns = np.round((fvals[idx] - f).imag / (2 * np.pi))
        return f + 2j * np.pi * turns

    def _cauchy(self, xi, offset, fvals):
        xi = np.atleast_1d(np.asarray(xi, dtype=complex))
        t = self.nodes + offset
        wf = self.weights * fvals
        out = np.empty(xi.shape, dtype=complex)
        flat = xi.ravel()
        res = out.ravel()
        for s in range(0, flat.size, _CHUNK):
            block = flat[s:s + _CHUNK]
            res[s:s + _CHUNK] = (wf[None, :] / (t[None, :] - block[:, None])).sum(axis=1)
        # near the line the panels far out are long compared with the distance to
        # the pole 1/(t - xi); subtract f(xi) there and integrate 1/(t - xi) exactly
        near = np.abs(flat.imag - offset.imag) <= 1.5 * self.w
        if near.any():
            z = flat[near]
            fz = self._remainder_at(z, fvals)
            a, b = self.diagnostics["span"]
            smooth = np.empty(z.shape, dtype=complex)
            for s in range(0, z.size, _CHUNK):
                block = z[s:s + _CHUNK]
                fb = fz[s:s + _CHUNK]
                smooth[s:s + _CHUNK] = (self.weights[None, :] * (fvals[None, :] - fb[:, None])
                                        / (t[None, :] - block[:, None])).sum(axis=1)
            res[near] = smooth + fz * (np.log(b + offset - z) - np.log(a + offset - z))
        return res.reshape(xi.shape) / (2j * np.pi)

    def plus_cauchy(self, xi):
        """L+ from its Cauchy representation; valid for Im xi > -w."""
        xi = np.asarray(xi, dtype=complex)
        if self.trivial:
            return np.ones_like(xi)
        f = self._cauchy(xi, -1j * self.w, self.f_lo).reshape(xi.shape)
        return np.exp(0.5 * self.log_c + self.nu * log_kappa_plus(xi, self.kxz) + f)

    def minus_cauchy(self, xi):
        """L- from its Cauchy representation; valid for Im xi < +w."""
        xi = np.asarray(xi, dtype=complex)
        if self.trivial:
            return np.ones_like(xi)
        f = -self._cauchy(xi, 1j * self.w, self.f_hi).reshape(xi.shape)
        return np.exp(0.5 * self.log_c - self.nu * log_kappa_minus(xi, self.kxz) + f)

    def plus(self, xi):
        xi = np.asarray(xi, dtype=complex)
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi)
        out = np.empty_like(xi)
        up = xi.imag >= -0.5 * self.w
        if up.any():
            out[up] = self.plus_cauchy(xi[up])
        if (~up).any():
            lo = xi[~up]
            out[~up] = self.L(lo) / self.minus_cauchy(lo)
        return complex(out[0]) if scalar else out

    def minus(self, xi):
        xi = np.asarray(xi, dtype=complex)
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi)
        out = np.empty_like(xi)
        down = xi.imag <= 0.5 * self.w
        if down.any():
            out[down] = self.minus_cauchy(xi[down])
        if (~down).any():
            hi = xi[~down]
            out[~down] = self.L(hi) / self.plus_cauchy(hi)
        return complex(out[0]) if scalar else out

    def measure_product_error(self, points):
        points = np.asarray(points, dtype=complex)
        if points.size == 0:
            return 0.0
        ratio = self.plus_cauchy(points) * self.minus_cauchy(points) / self.L(points)
        return float(np.max(np.abs(ratio - 1.0)))

    def refined(self):
        """Same construction with every Cauchy panel bisected (stability probe)."""
        return _build(self.spec, self.diagnostics["step"] / 2, self.diagnostics["far_scale"] / 2,
                      self.diagnostics["near"])


def strip_validation_points(spec: KernelSpec, n=200, seed=42):
    rng = np.random.default_rng(seed)
    a = abs(spec.kxz)
    re = rng.uniform(-3 * a, 3 * a, n)
    tail = a * np.logspace(0.5, 6, 24)
    re = np.concatenate([re, tail, -tail])
    im = rng.uniform(-0.5, 0.5, re.size) * spec.strip_halfwidth
    return re + 1j * im


def _surface_zero_abscissa(kxz, delta):
    """|Re| of any zero of L on the principal sheet (0 if none)."""
    if np.isinf(delta):
        return 0.0
    cands = kxz * delta / np.sqrt(1 + delta * delta + 0j)
    out = 0.0
    for z0 in (cands, -cands):
        if abs(_kernel(z0, kxz, delta)) < 1e-8:
            out = max(out, abs(z0.real))
    return out


def near_field_halfwidth(kxz, delta):
    return max(3.0 * abs(kxz), 1.6 * _surface_zero_abscissa(kxz, delta))


def _build(spec: KernelSpec, step, far_scale, near):
    kxz, delta, w = spec.kxz, spec.delta, spec.strip_halfwidth
    breaks = _line_breaks(near, step, w, far_scale, 1e10 * abs(kxz))
    nodes, weights = composite_gauss(breaks)
    if 2 * nodes.size > spec.node_budget:
        raise ToleranceNotMet(f"factorization needs {2 * nodes.size} nodes, budget is {spec.node_budget}")
    diag = {"step": step, "far_scale": far_scale, "near": near, "span": (float(breaks[0]), float(breaks[-1]))}
    if np.isinf(delta) or abs(1.0 / delta) < 1e-15:
        fk = FactorizedKernel(spec, 0j, 0j, nodes, weights, np.zeros(nodes.size, complex),
                              np.zeros(nodes.size, complex), trivial=True, diagnostics=diag)
        fk.product_error = 0.0
        return fk

    def unwrapped_log(t):
        vals = _kernel(t, kxz, delta)
        if np.min(np.abs(vals)) < 1e-10:
            raise KernelZeroOnContour("kernel vanishes on the factorization contour")
        return np.log(np.abs(vals)) + 1j * np.unwrap(np.angle(vals))

    t_lo = nodes - 1j * w
    t_hi = nodes + 1j * w
    log_lo = unwrapped_log(t_lo)
    log_hi = unwrapped_log(t_hi)
    drift = (log_lo[-1] - log_lo[0]) - (log_hi[-1] - log_hi[0])
    if abs(drift) > 1.0:
        raise KernelZeroOnContour(
            f"kernel has a zero inside the strip (winding mismatch {drift.imag / (2 * np.pi):.2f})")
    ell_plus = 1 + 1j / delta
    ell_minus = 1 - 1j / delta
    log_minus = np.log(ell_minus)
    log_lo = log_lo - 2j * np.pi * np.round((log_lo[0] - log_minus).imag / (2 * np.pi))
    log_hi = log_hi - 2j * np.pi * np.round((log_hi[0] - log_minus).imag / (2 * np.pi))
    log_plus = np.log(ell_plus)
    log_plus += 2j * np.pi * np.round((log_lo[-1] - log_plus).imag / (2 * np.pi))
    nu = (log_minus - log_plus) / (1j * np.pi)
    log_c = 0.5 * (log_plus + log_minus)

    def remainder(t, logl):
        return logl - log_c - nu * (log_kappa_plus(t, kxz) - log_kappa_minus(t, kxz))

    f_lo = remainder(t_lo, log_lo)
    f_hi = remainder(t_hi, log_hi)
    diag.update(line_nodes=nodes, log_kernel_lo=log_lo, log_kernel_hi=log_hi,
                end_residual=float(max(abs(f_lo[0]), abs(f_lo[-1]), abs(f_hi[0]), abs(f_hi[-1]))))
    return FactorizedKernel(spec, complex(nu), complex(log_c), nodes, weights, f_lo, f_hi, diagnostics=diag)


def factorize(spec: KernelSpec, tol: float = 1e-10, validation_points=None, max_refinements=4):
    """Split ``L = L+ L-`` numerically; product identity checked to ``tol``."""
    w = spec.strip_halfwidth
    b = -spec.kxz.imag
    step = 2.0 * min(0.5 * w, b - w)
    near = near_field_halfwidth(spec.kxz, spec.delta)
    far_scale = 1.0
    pts = strip_validation_points(spec) if validation_points is None else np.asarray(validation_points)
    for _ in range(max_refinements + 1):
        fk = _build(spec, step, far_scale, near)
        if fk.trivial:
            return fk
        fk.product_error = fk.measure_product_error(pts)
        if fk.product_error <= tol:
            return fk
        step /= 2
        far_scale /= 2
    raise ToleranceNotMet(f"product error {fk.product_error:.3g} > tol {tol:.3g} after refinement")
