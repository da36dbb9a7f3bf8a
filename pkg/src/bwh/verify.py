"""Residual checkers that test each analytic step against an independent oracle.

Every checker returns a :class:`ResidualReport` with ``passed`` equal to
``max_residual <= tolerance``.  Residuals are normalised by a local field
magnitude so reports are unit-free.  Sample points come from seeded
generators, so reports are reproducible.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BWHError, ShadowBoundaryWarning
from .incident import IncidentSpectral, incident_exact, incident_far, incident_far_gradient
from .kernel import strip_validation_points
from .solver import pole_contribution, residue_analytic, residue_numeric, scattered_field, scattered_gradient


@dataclass
class ResidualReport:
    check_name: str
    samples: int
    max_residual: float
    median_residual: float
    tolerance: float
    passed: bool
    details: list = field(default_factory=list)

    @classmethod
    def from_residuals(cls, name, residuals, tolerance, details=None):
        r = np.asarray(residuals, dtype=float)
        if r.size == 0:
            return cls(name, 0, 0.0, 0.0, float(tolerance), True, details or [])
        mx = float(np.max(r)) if np.all(np.isfinite(r)) else float("inf")
        return cls(name, int(r.size), mx, float(np.median(r)), float(tolerance),
                   bool(mx <= tolerance), details or [])

    def to_dict(self):
        return {"check_name": self.check_name, "tolerance": self.tolerance,
                "max_residual": self.max_residual, "median_residual": self.median_residual,
                "passed": self.passed, "samples": _jsonable(self.details)}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def summary(self):
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.check_name}: max {self.max_residual:.3e} "
                f"(median {self.median_residual:.3e}, tol {self.tolerance:.1e}, n={self.samples})")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


# --- Helmholtz ------------------------------------------------------------------

def stencil_residual(field_fn, kxz, x, z, h):
    """|(d_xx + d_zz + k^2) Q| / |k^2 Q| from the 5-point stencil."""
    q0 = field_fn(x, z)
    lap = (field_fn(x + h, z) + field_fn(x - h, z) + field_fn(x, z + h) + field_fn(x, z - h) - 4 * q0) / h ** 2
    return abs(lap + kxz ** 2 * q0) / abs(kxz ** 2 * q0)


def helmholtz_residual(field_fn, kxz, points, h, name="helmholtz", slope_tol=0.2):
    """Observed stencil order from runs at ``h`` and ``h/2``; passes when it is 2 within ``slope_tol``.

    A field that does not satisfy the equation plateaus instead of
    converging, giving a slope near 0.
    """
    res, details = [], []
    for x, z in points:
        r1 = stencil_residual(field_fn, kxz, x, z, h)
        r2 = stencil_residual(field_fn, kxz, x, z, h / 2)
        slope = math.log2(r1 / r2) if r1 > 0 and r2 > 0 else float("nan")
        dev = abs(slope - 2.0) if math.isfinite(slope) else float("inf")
        res.append(dev)
        details.append({"x": x, "z": z, "residual_h": r1, "residual_h2": r2, "slope": slope})
    return ResidualReport.from_residuals(name, res, slope_tol, details)


def helmholtz_points(kxz, n=6, seed=42, radius=(2.0, 6.0), min_dist=None):
    """Seeded points in an annulus, kept away from the plane ``z = 0``."""
    rng = np.random.default_rng(seed)
    K = abs(kxz)
    pts = []
    while len(pts) < n:
        r = rng.uniform(*radius) / K
        th = rng.uniform(-math.pi, math.pi)
        x, z = r * math.cos(th), r * math.sin(th)
        if abs(z) > (min_dist if min_dist is not None else 0.5 / K):
            pts.append((x, z))
    return pts


# --- incident field -------------------------------------------------------------

def spectral_identity_check(src, ctx, points, tol=1e-6):
    oracle = IncidentSpectral(ctx, tol=min(1e-10, tol * 1e-3))
    res, details = [], []
    for x, z in points:
        exact = incident_exact(x, z, src, ctx)
        try:
            spec = oracle(x, z, src)
            err = abs(spec - exact) / abs(exact)
        except BWHError as exc:
            spec, err = complex("nan"), float("inf")
            details.append({"x": x, "z": z, "error": str(exc)})
            res.append(err)
            continue
        res.append(err)
        details.append({"x": x, "z": z, "exact": exact, "spectral": spec, "rel_error": err})
    return ResidualReport.from_residuals("spectral_identity", res, tol, details)


def spectral_identity_points(src, ctx, n=20, seed=42, kr_range=(2.0, 50.0)):
    """Points whose distance from the source satisfies ``|kxz| R`` in ``kr_range``."""
    rng = np.random.default_rng(seed)
    K = abs(ctx.kxz)
    kr = rng.uniform(*kr_range, n)
    th = rng.uniform(-math.pi, math.pi, n)
    return [(float(k / K * math.cos(t) - src.x0), float(k / K * math.sin(t) - src.z0)) for k, t in zip(kr, th)]


def plane_wave_check(src, ctx, points, tol=1e-2):
    res = [abs(incident_far(x, z, src) / incident_exact(x, z, src, ctx) - 1) for x, z in points]
    return ResidualReport.from_residuals("incident_far_reduction", res, tol,
                                         [{"x": x, "z": z, "rel_error": r} for (x, z), r in zip(points, res)])


# --- kernel ---------------------------------------------------------------------

def _winding(fn, corners, n_side=4000):
    path = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        path.append(a + (b - a) * np.linspace(0, 1, n_side, endpoint=False))
    vals = fn(np.concatenate(path + [path[0][:1]]))
    return float(np.round(np.sum(np.diff(np.unwrap(np.angle(vals)))) / (2 * np.pi)))


def factor_windings(fk, extent=None, height=None):
    """Zero counts of L+ in a box above the strip and L- in a box below it."""
    w = fk.w
    X = 3 * abs(fk.kxz) if extent is None else extent
    Y = 3 * abs(fk.kxz) if height is None else height
    up = [complex(-X, -w / 2), complex(X, -w / 2), complex(X, Y), complex(-X, Y)]
    lo = [complex(-X, -Y), complex(X, -Y), complex(X, w / 2), complex(-X, w / 2)]
    return _winding(fk.plus, up), _winding(fk.minus, lo)


def factorization_check(fk, points=None, tol=1e-8):
    """Product identity at strip points plus zero counts of each factor (must be 0)."""
    pts = strip_validation_points(fk.spec) if points is None else np.asarray(points, dtype=complex)
    if pts.size:
        ratio = fk.plus_cauchy(pts) * fk.minus_cauchy(pts) / fk.L(pts)
        prod = np.abs(ratio - 1.0)
    else:
        prod = np.zeros(0)
    wp, wm = factor_windings(fk)
    details = [{"xi": complex(p), "product_error": float(e)} for p, e in zip(pts, prod)]
    details.append({"winding_plus": wp, "winding_minus": wm})
    res = np.concatenate([prod, [abs(wp), abs(wm)]])
    return ResidualReport.from_residuals("factorization", res, tol, details)


def factorization_stability(fk, points=None, tol=1e-9):
    """Change in L+ and L- when every Cauchy panel is bisected."""
    pts = strip_validation_points(fk.spec) if points is None else np.asarray(points, dtype=complex)
    fine = fk.refined()
    dp = np.abs(fine.plus(pts) / fk.plus(pts) - 1)
    dm = np.abs(fine.minus(pts) / fk.minus(pts) - 1)
    res = np.maximum(dp, dm)
    return ResidualReport.from_residuals("factorization_stability", res, tol,
                                         [{"xi": complex(p), "change": float(r)} for p, r in zip(pts, res)])


# --- boundary / continuity --------------------------------------------------------

def surface_samples(kxz, n=200, lo=1e-2, hi=1e2):
    return (np.geomspace(lo, hi, n) / abs(kxz)).tolist()


def _gradient(x, z, sol, tol, incident_only):
    gx, gz = incident_far_gradient(x, z, sol.src)
    qi = incident_far(x, z, sol.src)
    if incident_only:
        return qi, gx, gz
    q, qx, qz = scattered_gradient(x, z, sol, tol, warn=False)
    return q + qi, qx + gx, qz + gz


def boundary_check(sol, xs, tol=1e-3, quad_tol=1e-10, incident_only=False):
    """Impedance condition ``dQ/dx -+ delta dQ/dz = 0`` on both faces of the conductor."""
    res, details = [], []
    d = sol.delta
    for x in xs:
        for face, z in ((1, 0.0), (-1, -0.0)):
            _, qx, qz = _gradient(x, z, sol, quad_tol, incident_only)
            r = abs(qx - face * d * qz) / math.hypot(abs(qx), abs(d * qz))
            res.append(r)
            details.append({"x": x, "face": face, "residual": r})
    name = "boundary_incident_only" if incident_only else "boundary"
    return ResidualReport.from_residuals(name, res, tol, details)


def continuity_check(sol, xs, tol=1e-8, quad_tol=1e-10):
    """Field and z-derivative continuity across ``z = 0`` for ``x < 0``, in units of ``|c|``."""
    res, details = [], []
    c = abs(sol.src.amplitude_c)
    K = abs(sol.kxz)
    for x in xs:
        up = _gradient(-abs(x), 0.0, sol, quad_tol, False)
        dn = _gradient(-abs(x), -0.0, sol, quad_tol, False)
        r = max(abs(up[0] - dn[0]) / c, abs(up[2] - dn[2]) / (c * K))
        res.append(r)
        details.append({"x": -abs(x), "residual": r})
    return ResidualReport.from_residuals("continuity", res, tol, details)


# --- pole term --------------------------------------------------------------------

def shadow_points(sol, n=50, seed=42, radius=(1.0, 20.0)):
    """Seeded points above the plane on the captured side of the shadow boundary."""
    rng = np.random.default_rng(seed)
    K = abs(sol.kxz)
    edge = math.pi + sol.src.phi0
    r = rng.uniform(*radius, n) / K
    th = rng.uniform(0.05, 0.95, n) * edge
    return [(float(a * math.cos(t)), float(a * math.sin(t))) for a, t in zip(r, th)]


def cancellation_check(sol, points, tol=1e-10):
    """|incident_far + pole term| / |incident_far|, pole term from a numerical residue."""
    res, details = [], []
    for x, z in points:
        inc = incident_far(x, z, sol.src)
        r = abs(inc + pole_contribution(x, z, sol, method="numeric")) / abs(inc)
        res.append(r)
        details.append({"x": x, "z": z, "ratio": r})
    return ResidualReport.from_residuals("cancellation", res, tol, details)


def residue_agreement(sol, tol=1e-8):
    res = []
    for side in (1, -1):
        a = residue_analytic(sol, side)
        res.append(abs(residue_numeric(sol, side) - a) / abs(a))
    return ResidualReport.from_residuals("residue_dual_method", res, tol, [{"side": 1, "rel": res[0]},
                                                                          {"side": -1, "rel": res[1]}])


# --- edge -----------------------------------------------------------------------

def edge_exponent(sol, theta=math.pi / 2, rs=None, tol=0.1, quad_tol=1e-11):
    """Fit ``|Q(2r) - Q(r)| ~ r^p`` near the edge; the edge condition wants p = 1/2."""
    K = abs(sol.kxz)
    rs = np.geomspace(1e-3, 1e-1, 9) / K if rs is None else np.asarray(rs)

    def q(r):
        x, z = r * math.cos(theta), r * math.sin(theta)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShadowBoundaryWarning)
            return incident_far(x, z, sol.src) + scattered_field(x, z, sol, quad_tol)

    diffs = np.array([abs(q(2 * r) - q(r)) for r in rs])
    p = float(np.polyfit(np.log(rs), np.log(diffs), 1)[0])
    return ResidualReport.from_residuals("edge_exponent", [abs(p - 0.5)], tol,
                                         [{"exponent": p, "r": rs.tolist(), "diff": diffs.tolist()}])


def surface_relation_check(sol1, sol2, eta2, xs, tol=1e-3, quad_tol=1e-10):
    """|Q1y / (i eta2 Q2y) - 1| on the conductor, total fields.

    Informational: the two partial waves are solved with independent incident
    waves, so the ratio is not expected to be constant.
    """
    res, details = [], []
    for x in xs:
        q1 = incident_far(x, 0.0, sol1.src) + scattered_field(x, 0.0, sol1, quad_tol, warn=False)
        q2 = incident_far(x, 0.0, sol2.src) + scattered_field(x, 0.0, sol2, quad_tol, warn=False)
        r = abs(q1 / (1j * eta2 * q2) - 1)
        res.append(r)
        details.append({"x": x, "q1": q1, "q2": q2, "residual": r})
    return ResidualReport.from_residuals("surface_relation", res, tol, details)


# --- suite ------------------------------------------------------------------------

def negative_control(report, name):
    """Wrap a report that is supposed to fail; residual = tolerance / max_residual."""
    margin = report.tolerance / report.max_residual if report.max_residual > 0 else float("inf")
    return ResidualReport.from_residuals(name, [margin], 1.0, [{"control": report.to_dict()}])


def far_source_check(ctx, n=20, seed=42, r0_wavelengths=1e4, r_wavelengths=10.0, tol=1e-2):
    """Plane-wave reduction of the line source: source 1e4 wavelengths away, points 10 out.

    Runs without damping, which would otherwise wipe out the exact field over
    that distance.
    """
    from .incident import source_spec
    lossless = ctx.with_loss(0.0)
    lam = 2 * math.pi / lossless.kxz.real
    src = source_spec(lossless, r0=r0_wavelengths * lam, phi0=-0.75 * math.pi)
    rng = np.random.default_rng(seed)
    ang = rng.uniform(-math.pi, math.pi, n)
    pts = [(float(r_wavelengths * lam * math.cos(a)), float(r_wavelengths * lam * math.sin(a))) for a in ang]
    return plane_wave_check(src, lossless, pts, tol)


def run_suite(sol, names, seed=42, quad_tol=1e-10, k_scale=1.0):
    """Run the named checks against ``sol``; returns reports in the order given."""
    ctx, src, K = sol.ctx, sol.src, sol.kxz
    out = []
    for name in names:
        if name == "spectral_identity":
            r = spectral_identity_check(src, ctx, spectral_identity_points(src, ctx, seed=seed))
        elif name == "incident_far":
            r = far_source_check(ctx, seed=seed)
        elif name == "factorization":
            r = factorization_check(sol.kernel)
        elif name == "factorization_stability":
            r = factorization_stability(sol.kernel)
        elif name == "cancellation":
            r = cancellation_check(sol, shadow_points(sol, seed=seed))
        elif name == "residue":
            r = residue_agreement(sol)
        elif name == "boundary":
            r = boundary_check(sol, surface_samples(K), quad_tol=quad_tol)
        elif name == "boundary_negative":
            r = negative_control(boundary_check(sol, surface_samples(K, 20), incident_only=True),
                                 "boundary_negative_control")
        elif name == "continuity":
            r = continuity_check(sol, surface_samples(K, 50), tol=max(quad_tol, 1e-8), quad_tol=quad_tol)
        elif name == "edge":
            r = edge_exponent(sol)
        elif name in ("helmholtz", "helmholtz_negative"):
            pts = helmholtz_points(K, seed=seed)
            h = 0.2 / abs(K)
            kk = K * k_scale

            def total(x, z):
                return incident_far(x, z, src) + scattered_field(x, z, sol, 1e-12, warn=False)
            if name == "helmholtz":
                r = helmholtz_residual(total, kk, pts, h, name="helmholtz_total")
            else:
                r = negative_control(helmholtz_residual(total, 1.1 * kk, pts, h), "helmholtz_negative_control")
        else:
            raise ValueError(f"unknown check {name!r}")
        out.append(r)
    return out
