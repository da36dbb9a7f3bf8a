import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwh.exceptions import AchiralDegenerate, ConfigError, DecoupledCase, EvanescentPartialWave, SingularMedium
from bwh.medium import (BeltramiPair, MediumParams, beltrami_from_eh, derive_medium, eh_from_beltrami,
                        propagation_context, propagation_context_from_gammas)

pos = st.floats(0.1, 10.0)
chir = st.floats(-0.3, 0.3)


@st.composite
def media(draw):
    p = MediumParams(draw(pos), draw(pos), draw(chir), draw(chir), draw(st.floats(0.1, 3.0)))
    if abs(p.k ** 2 * p.alpha * p.beta) >= 0.9:
        p = MediumParams(p.epsilon, p.mu, 0.0, p.beta, p.omega)
    return p


@settings(max_examples=300, deadline=None)
@given(media())
def test_wavenumber_identities(p):
    m = derive_medium(p)
    d = 1 - m.k ** 2 * p.alpha * p.beta
    assert m.gamma1 * m.gamma2 * d == pytest.approx(m.k ** 2, rel=1e-12)
    assert (m.gamma1 - m.gamma2) == pytest.approx(m.k ** 2 * (p.alpha + p.beta) / d, rel=1e-12, abs=1e-12 * m.k)
    assert m.eta1 * m.eta2 == pytest.approx(m.eta ** 2, rel=1e-12)
    assert m.gamma1 > 0 and m.gamma2 > 0


@settings(max_examples=100, deadline=None)
@given(media(), st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                         min_size=6, max_size=6))
def test_beltrami_round_trip(p, vals):
    m = derive_medium(p)
    E, H = np.array(vals[:3]), np.array(vals[3:])
    E2, H2 = eh_from_beltrami(beltrami_from_eh(E, H, m), m)
    scale = max(1.0, np.abs(E).max(), np.abs(H).max())
    assert np.abs(E2 - E).max() <= 1e-13 * scale * 10
    assert np.abs(H2 - H).max() <= 1e-13 * scale * 10


def test_achiral_limit_exact():
    m = derive_medium(MediumParams(1.0, 1.0, 0.0, 0.0, 2.0))
    assert (m.gamma1, m.gamma2, m.eta1, m.eta2) == (2.0, 2.0, 1.0, 1.0)


def test_achiral_limit_is_continuous():
    vals = [derive_medium(MediumParams(1.0, 1.0, a, 0.5 * a, 2.0)) for a in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert abs(vals[-1].gamma1 - 2.0) < 1e-7 and abs(vals[-1].eta1 - 1.0) < 1e-7
    diffs = [abs(v.gamma1 - 2.0) for v in vals]
    assert diffs == sorted(diffs, reverse=True)


def test_worked_example():
    m = derive_medium(MediumParams(1.0, 1.0, 0.1, 0.1, 1.0))
    assert m.gamma1 == pytest.approx(1.1 / 0.99, rel=1e-14)
    assert m.gamma2 == pytest.approx(0.9 / 0.99, rel=1e-14)


def test_default_medium_gives_reference_gammas():
    m = derive_medium(MediumParams(1.0, 1.0, 1 / 12, 1 / 12, 12 / 7))
    assert m.gamma1 == pytest.approx(2.0, rel=1e-14)
    assert m.gamma2 == pytest.approx(1.5, rel=1e-14)


def test_impedances_differ_when_alpha_ne_beta():
    m = derive_medium(MediumParams(1.0, 1.0, 0.2, 0.05, 1.0))
    assert m.eta1 != pytest.approx(m.eta2)


def test_singular_medium():
    with pytest.raises(SingularMedium):
        derive_medium(MediumParams(1.0, 1.0, 1.0, 1.0, 1.0))


@pytest.mark.parametrize("kw", [{"epsilon": 0.0}, {"mu": -1.0}, {"omega": float("nan")}, {"alpha": float("inf")}])
def test_invalid_params(kw):
    with pytest.raises(ConfigError):
        MediumParams(**kw)


def test_context_reference_values():
    ctx = propagation_context_from_gammas(2.0, 1.5, 1.0)
    assert ctx.k1xz == pytest.approx(math.sqrt(3))
    assert ctx.k2xz == pytest.approx(math.sqrt(1.25))
    assert ctx.delta == pytest.approx(4j, rel=1e-14)


def test_context_loss_convention():
    ctx = propagation_context_from_gammas(2.0, 1.5, 1.0, loss=0.05)
    assert ctx.k1xz.imag == -0.05 and ctx.k2xz.imag == -0.05
    assert ctx.delta == pytest.approx(4j)
    assert ctx.mirrored().kxz == ctx.k2xz and ctx.mirrored().gamma == 1.5


def test_context_errors():
    with pytest.raises(AchiralDegenerate):
        propagation_context_from_gammas(2.0, 2.0, 1.0)
    with pytest.raises(DecoupledCase):
        propagation_context_from_gammas(2.0, 1.5, 0.0)
    with pytest.raises(EvanescentPartialWave):
        propagation_context_from_gammas(0.5, 1.5, 1.0)
    with pytest.raises(EvanescentPartialWave):
        propagation_context_from_gammas(2.0, 0.9, 1.0).mirrored()
    with pytest.raises(ConfigError):
        propagation_context_from_gammas(2.0, 1.5, 1.0, loss=-1)


def test_propagation_context_from_medium():
    m = derive_medium(MediumParams(1.0, 1.0, 1 / 12, 1 / 12, 12 / 7))
    assert propagation_context(m, 1.0).k1xz == pytest.approx(math.sqrt(3))


def test_beltrami_special_cases():
    m = derive_medium(MediumParams(2.0, 1.0, 0.1, 0.03, 1.3))
    E = np.array([1.0, 2j, -0.5])
    q = beltrami_from_eh(E, -1j * E / m.eta1, m)
    assert np.allclose(q.Q2, 0, atol=1e-15) and np.allclose(q.Q1, E, rtol=1e-14)
    E2, H2 = eh_from_beltrami(BeltramiPair(E, np.zeros(3)), m)
    assert np.allclose(E2, E) and np.allclose(H2, -1j * E / m.eta1)
    z = beltrami_from_eh(np.zeros(3), np.zeros(3), m)
    assert not z.Q1.any() and not z.Q2.any()
