import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwh.exceptions import BranchPointSingularity, ConfigError, ToleranceNotMet
from bwh.kernel import KernelSpec, factorize, kernel_L, strip_validation_points
from bwh.verify import factor_windings


def test_kernel_limits(ctx):
    big = 1e8
    assert kernel_L(big, ctx) == pytest.approx(1 + 1j / ctx.delta, rel=1e-6)
    assert kernel_L(-big, ctx) == pytest.approx(1 - 1j / ctx.delta, rel=1e-6)
    assert kernel_L(0.0, ctx) == 1.0


def test_branch_points(ctx):
    with pytest.raises(BranchPointSingularity):
        kernel_L(ctx.kxz, ctx)


def test_product_identity(kernel):
    pts = strip_validation_points(kernel.spec)
    err = np.abs(kernel.plus_cauchy(pts) * kernel.minus_cauchy(pts) / kernel.L(pts) - 1)
    assert err.max() < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.floats(-30, 30), st.floats(-0.5, 0.5))
def test_product_identity_property(kernel, re, frac):
    xi = complex(re, frac * kernel.w)
    assert abs(kernel.plus(xi) * kernel.minus(xi) / kernel.L(xi) - 1) < 1e-10


def test_samplers_switch_consistently(kernel):
    xi = np.array([0.3 - 0.8j * kernel.w, 1.1 + 0.8j * kernel.w])
    assert np.allclose(kernel.plus(xi), kernel.L(xi) / kernel.minus(xi), rtol=1e-12)


def test_factors_have_no_zeros(kernel):
    assert factor_windings(kernel) == (0.0, 0.0)


def test_refinement_stability(kernel):
    fine = kernel.refined()
    pts = strip_validation_points(kernel.spec, n=50)
    assert np.max(np.abs(fine.plus(pts) / kernel.plus(pts) - 1)) < 1e-9


def test_large_xi_behaviour(kernel):
    # the plus factor grows no faster than a power: ratio at 10x distance stays bounded
    t = np.array([10.0, 100.0, 1000.0]) * abs(kernel.kxz)
    mags = np.abs(kernel.plus(1j * t))
    assert np.all(np.isfinite(mags)) and mags.max() / mags.min() < 10


def test_trivial_kernel():
    fk = factorize(KernelSpec(complex(np.sqrt(3), -0.02), complex(np.inf)))
    assert fk.trivial and fk.plus(0.5) == 1 and fk.product_error == 0.0


def test_spec_errors():
    with pytest.raises(ConfigError):
        KernelSpec(complex(np.sqrt(3), 0.0), 4j)
    with pytest.raises(ConfigError):
        KernelSpec(complex(np.sqrt(3), -0.02), 4j, strip_halfwidth=0.05)
    with pytest.raises(ToleranceNotMet):
        factorize(KernelSpec(complex(np.sqrt(3), -0.02), 4j, node_budget=1))


def test_default_strip(ctx):
    spec = KernelSpec.from_context(ctx)
    assert spec.strip_halfwidth == pytest.approx(0.5 * ctx.loss)
