import math

import numpy as np
import pytest

from bwh.exceptions import ConfigError, SourcePointSingularity
from bwh.incident import (IncidentSpectral, incident_exact, incident_far, incident_far_gradient, incident_spectral,
                          source_spec)
from bwh.medium import propagation_context_from_gammas

from conftest import PHI0


def _points(src, ctx, rng, n, lo=2, hi=50):
    K = abs(ctx.kxz)
    kr = rng.uniform(lo, hi, n)
    th = rng.uniform(-math.pi, math.pi, n)
    return [(k / K * math.cos(t) - src.x0, k / K * math.sin(t) - src.z0) for k, t in zip(kr, th)]


@pytest.mark.parametrize("loss", [0.02, 0.0])
def test_spectral_equals_hankel(loss, rng):
    ctx = propagation_context_from_gammas(2.0, 1.5, 1.0, loss)
    src = source_spec(ctx, r0=1.0, phi0=PHI0)
    oracle = IncidentSpectral(ctx)
    for x, z in _points(src, ctx, rng, 12):
        exact = incident_exact(x, z, src, ctx)
        assert abs(oracle(x, z, src) - exact) < 1e-8 * abs(exact)


def test_spectral_on_source_line(ctx):
    src = source_spec(ctx, r0=1.0, phi0=PHI0)
    x, z = 5.0 - src.x0, -src.z0
    assert incident_spectral(x, z, src, ctx) == pytest.approx(incident_exact(x, z, src, ctx), rel=1e-8)


def test_plane_wave_limit():
    ctx = propagation_context_from_gammas(2.0, 1.5, 1.0, 0.0)
    src = source_spec(ctx, r0=1e6, phi0=PHI0)
    for x, z in [(0.0, 0.0), (1.0, -2.0), (-3.0, 0.5)]:
        assert incident_far(x, z, src) == pytest.approx(incident_exact(x, z, src, ctx), rel=1e-4)


def test_plane_wave_at_origin_is_c(src):
    assert incident_far(0.0, 0.0, src) == src.amplitude_c


def test_plane_wave_gradient(src):
    h = 1e-6
    gx, gz = incident_far_gradient(0.3, 0.4, src)
    assert gx == pytest.approx((incident_far(0.3 + h, 0.4, src) - incident_far(0.3 - h, 0.4, src)) / (2 * h), rel=1e-7)
    assert gz == pytest.approx((incident_far(0.3, 0.4 + h, src) - incident_far(0.3, 0.4 - h, src)) / (2 * h), rel=1e-7)


def test_source_forms_agree(ctx):
    a = source_spec(ctx, r0=10.0, phi0=PHI0)
    b = source_spec(ctx, x0=a.x0, z0=a.z0)
    assert b.r0 == pytest.approx(10.0) and b.phi0 == pytest.approx(PHI0)
    assert b.k1x == pytest.approx(a.k1x)


def test_source_errors(ctx):
    with pytest.raises(ConfigError):
        source_spec(ctx, r0=1.0, phi0=PHI0, x0=1.0, z0=1.0)
    with pytest.raises(ConfigError):
        source_spec(ctx)
    with pytest.raises(ConfigError):
        source_spec(ctx, r0=1.0)
    with pytest.raises(ConfigError):
        source_spec(ctx, r0=0.0, phi0=PHI0)
    with pytest.warns(UserWarning):
        source_spec(ctx, r0=1.0, phi0=0.3)


def test_source_point_singularity(ctx):
    src = source_spec(ctx, r0=1.0, phi0=PHI0)
    with pytest.raises(SourcePointSingularity):
        incident_exact(-src.x0, -src.z0, src, ctx)
    with pytest.raises(SourcePointSingularity):
        incident_spectral(-src.x0, -src.z0, src, ctx)


def test_linearity(src):
    assert incident_far(1.0, 2.0, src.scaled(2.0)) == pytest.approx(2 * incident_far(1.0, 2.0, src), rel=1e-15)
