"""Acceptance suite: eleven criteria at their stated tolerances and time budgets.

Each test prints a single ``PASS``/``FAIL`` line (visible with or without
``-s``) before asserting, so a failing criterion still reports its numbers.
"""
import math
import time
import warnings

import mpmath
import numpy as np
import pytest

from bwh.cli import main
from bwh.exceptions import ShadowBoundaryWarning
from bwh.farfield import far_field, shadow_flag
from bwh.incident import incident_exact, incident_far
from bwh.medium import MediumParams, derive_medium
from bwh.solver import geometric_optics, scattered_field
from bwh.specfun import hankel2_0
from bwh.verify import (boundary_check, cancellation_check, continuity_check, edge_exponent, factorization_check,
                        factorization_stability, far_source_check, helmholtz_points, helmholtz_residual,
                        shadow_points, spectral_identity_check, spectral_identity_points, surface_samples)

pytestmark = pytest.mark.acceptance


def _report(capsys, n, title, ok, detail, elapsed, budget):
    within = elapsed < budget
    line = (f"{'PASS' if ok and within else 'FAIL'} criterion {n:2d} {title}: {detail}; "
            f"{elapsed:.2f} s (budget {budget} s)")
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert within, line


def test_c01_medium_identities(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    n = 0
    while n < 1000:
        p = MediumParams(*rng.uniform(0.1, 10, 2), *rng.uniform(-0.3, 0.3, 2), rng.uniform(0.1, 3))
        if abs(p.k ** 2 * p.alpha * p.beta) >= 0.9:
            continue
        m = derive_medium(p)
        d = 1 - m.k ** 2 * p.alpha * p.beta
        e1 = abs(m.gamma1 * m.gamma2 * d / m.k ** 2 - 1)
        e2 = abs((m.gamma1 - m.gamma2) - m.k ** 2 * (p.alpha + p.beta) / d) / m.k
        worst = max(worst, e1, e2)
        n += 1
    a = derive_medium(MediumParams(2.0, 0.5, 0.0, 0.0, 1.5))
    achiral = a.gamma1 == a.gamma2 == a.k and a.eta1 == a.eta2 == a.eta
    _report(capsys, 1, "medium identities", worst < 1e-12 and achiral,
            f"max rel {worst:.2e} over {n} media (tol 1e-12), achiral exact {achiral}",
            time.perf_counter() - t0, 1)


def test_c02_special_functions(capsys):
    t0 = time.perf_counter()
    want = complex(mpmath.hankel2(0, 1))
    e1 = abs(hankel2_0(1.0) - want) / abs(want)
    xs = np.linspace(20, 200, 50)
    lead = np.sqrt(2 / (np.pi * xs)) * np.exp(-1j * (xs - np.pi / 4))
    ours = hankel2_0(xs)
    ratio = np.max(np.abs(lead - ours) / np.abs(ours) * 4 * xs)
    _report(capsys, 2, "special functions", e1 < 1e-9 and ratio <= 1,
            f"H0(2)(1) rel {e1:.2e} (tol 1e-9), asymptotic error / (1/4x) max {ratio:.3f} (<= 1)",
            time.perf_counter() - t0, 1)


def test_c03_spectral_identity(capsys, ctx, src):
    t0 = time.perf_counter()
    rep = spectral_identity_check(src, ctx, spectral_identity_points(src, ctx, n=20), tol=1e-6)
    _report(capsys, 3, "spectral identity", rep.passed and rep.samples == 20,
            f"max rel {rep.max_residual:.2e} at {rep.samples} points (tol 1e-6)", time.perf_counter() - t0, 30)


def test_c04_incident_far_reduction(capsys, ctx):
    # expected to fail: at 10 wavelengths off the source axis the Fresnel phase
    # k r_perp^2 / (2 r0) reaches about pi/100, i.e. a ~3% error
    t0 = time.perf_counter()
    rep = far_source_check(ctx, n=20, r0_wavelengths=1e4, r_wavelengths=10.0, tol=1e-2)
    _report(capsys, 4, "incident far-field reduction", rep.passed,
            f"max rel {rep.max_residual:.2e}, median {rep.median_residual:.2e} (tol 1e-2)",
            time.perf_counter() - t0, 5)


def test_c05_factorization(capsys, kernel):
    t0 = time.perf_counter()
    rep = factorization_check(kernel, tol=1e-8)
    stab = factorization_stability(kernel, tol=1e-9)
    wind = rep.details[-1]
    _report(capsys, 5, "kernel factorization", rep.passed and stab.passed,
            f"product max {rep.max_residual:.2e} (tol 1e-8, n={rep.samples - 2}), windings "
            f"{wind['winding_plus']:.0f}/{wind['winding_minus']:.0f}, doubling {stab.max_residual:.2e} (tol 1e-9)",
            time.perf_counter() - t0, 60)


def test_c06_go_cancellation(capsys, sol):
    t0 = time.perf_counter()
    rep = cancellation_check(sol, shadow_points(sol, n=50), tol=1e-10)
    _report(capsys, 6, "geometric-optics cancellation", rep.passed and rep.samples == 50,
            f"max {rep.max_residual:.2e} at 50 points, numerical residue (tol 1e-10)", time.perf_counter() - t0, 10)


def test_c07_saddle_point(capsys, sol):
    t0 = time.perf_counter()
    K = abs(sol.kxz)
    ok, parts, plain = True, [], []
    for kr, tol in ((100, 0.03), (400, 0.01)):
        r = kr / K
        for deg in (60, 90, 120):
            th = math.radians(deg)
            if shadow_flag(th, sol):
                continue
            x, z = r * math.cos(th), r * math.sin(th)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ShadowBoundaryWarning)
                ref = scattered_field(x, z, sol, tol=1e-11)
            go = geometric_optics(x, z, sol)
            err = abs(far_field(r, th, sol, "pole-corrected") + go - ref) / abs(ref)
            lead = abs(far_field(r, th, sol, "leading") + go - ref) / abs(ref)
            ok &= err < tol
            parts.append(f"{deg}@{kr} {err:.1e}")
            plain.append(f"{deg}@{kr} {lead:.1e}")
    _report(capsys, 7, "saddle point vs quadrature", ok,
            f"pole-corrected rel {', '.join(parts)} (tol 3%/1%); leading order alone {', '.join(plain)}",
            time.perf_counter() - t0, 120)


def test_c08_boundary(capsys, sol):
    t0 = time.perf_counter()
    quad_tol = 1e-10
    bc = boundary_check(sol, surface_samples(sol.kxz), tol=1e-3, quad_tol=quad_tol)
    cont = continuity_check(sol, surface_samples(sol.kxz, 50), tol=quad_tol, quad_tol=quad_tol)
    neg = boundary_check(sol, surface_samples(sol.kxz, 20), tol=1e-3, incident_only=True)
    _report(capsys, 8, "boundary contracts", bc.passed and cont.passed and not neg.passed,
            f"impedance max {bc.max_residual:.2e} (tol 1e-3), continuity max {cont.max_residual:.2e} "
            f"(tol {quad_tol:g}), incident-only control {neg.max_residual:.2e} fails {not neg.passed}",
            time.perf_counter() - t0, 60)


def test_c09_edge_exponent(capsys, sol):
    t0 = time.perf_counter()
    rep = edge_exponent(sol, tol=0.1)
    p = rep.details[0]["exponent"]
    _report(capsys, 9, "edge exponent", rep.passed, f"fitted {p:.3f} (0.5 +/- 0.1)", time.perf_counter() - t0, 30)


def test_c10_helmholtz(capsys, ctx, src, sol):
    t0 = time.perf_counter()
    K = sol.kxz
    pts = helmholtz_points(K, n=6)
    h = 0.2 / abs(K)

    def scat(x, z):
        return scattered_field(x, z, sol, 1e-12, warn=False)

    fields = {"incident": lambda x, z: incident_exact(x, z, src, ctx),
              "scattered": scat,
              "total": lambda x, z: incident_far(x, z, src) + scat(x, z)}
    reps = {k: helmholtz_residual(f, K, pts, h, name=k) for k, f in fields.items()}
    neg = helmholtz_residual(fields["total"], 1.1 * K, pts, h)
    slopes = {k: [d["slope"] for d in r.details] for k, r in reps.items()}
    ok = all(r.passed for r in reps.values()) and not neg.passed
    detail = ", ".join(f"{k} slopes {min(s):.2f}..{max(s):.2f}" for k, s in slopes.items())
    _report(capsys, 10, "Helmholtz residuals", ok,
            f"{detail} (2 +/- 0.2); wrong-k control max |slope-2| {neg.max_residual:.2f} detected {not neg.passed}",
            time.perf_counter() - t0, 60)


def test_c11_determinism(capsys, tmp_path):
    t0 = time.perf_counter()
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [main(["fieldmap", "--out", str(d), "--seed", "42"]) for d in (a, b)]
    same = (a / "fieldmap.csv").read_bytes() == (b / "fieldmap.csv").read_bytes()
    _report(capsys, 11, "field-map determinism", codes == [0, 0] and same,
            f"exit codes {codes}, byte-identical {same}", time.perf_counter() - t0, 60)
