"""Bi-isotropic medium: Beltrami wavenumbers, impedances and the 2-D reduction.

The medium is described in the Federov form ``D = eps (E + alpha curl E)``,
``B = mu (H + beta curl H)``.  The two Beltrami fields ``Q1`` (left-handed)
and ``Q2`` (right-handed) diagonalise the curl equations with wavenumbers
``gamma1`` and ``gamma2``.

Impedances use ``eta1 = eta / (S - k(alpha-beta)/2)`` and
``eta2 = eta / (S + k(alpha-beta)/2)`` with ``S = sqrt(1 + k^2 (alpha-beta)^2 / 4)``,
so that ``eta1 * eta2 == eta**2`` and both collapse to ``eta`` in the achiral
limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import (
    AchiralDegenerate,
    ConfigError,
    DecoupledCase,
    EvanescentPartialWave,
    SingularMedium,
)


@dataclass(frozen=True)
class MediumParams:
    epsilon: float = 1.0
    mu: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("epsilon", "mu", "omega"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
        for name in ("alpha", "beta"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    @property
    def k(self) -> float:
        return self.omega * math.sqrt(self.epsilon * self.mu)


@dataclass(frozen=True)
class DerivedMedium:
    k: float
    eta: float
    gamma1: float
    gamma2: float
    eta1: float
    eta2: float
    alpha: float = 0.0
    beta: float = 0.0


def derive_medium(p: MediumParams) -> DerivedMedium:
    """Beltrami wavenumbers and impedances of a bi-isotropic medium."""
    k = p.k
    eta = math.sqrt(p.mu / p.epsilon)
    denom = 1.0 - k * k * p.alpha * p.beta
    if abs(denom) < 1e-14:
        raise SingularMedium(f"k^2*alpha*beta = {1 - denom!r} is 1; medium is singular")
    s = math.sqrt(1.0 + k * k * (p.alpha - p.beta) ** 2 / 4.0)
    half_sum = k * (p.alpha + p.beta) / 2.0
    half_diff = k * (p.alpha - p.beta) / 2.0
    return DerivedMedium(
        k=k,
        eta=eta,
        gamma1=k / denom * (s + half_sum),
        gamma2=k / denom * (s - half_sum),
        eta1=eta / (s - half_diff),
        eta2=eta / (s + half_diff),
        alpha=p.alpha,
        beta=p.beta,
    )


@dataclass(frozen=True)
class PropagationContext:
    """Everything the reduced 2-D scalar problem needs.

    ``k1xz`` and ``k2xz`` carry the artificial damping: ``kxz = sqrt(gamma^2 - ky^2) - i*loss``.
    With the exp(-i kappa |z|) / H0^(2) convention used throughout, a negative
    imaginary part is what makes fields decay.  ``delta`` is computed from the
    undamped wavenumbers.  ``wave`` selects which Beltrami partial wave
    (1 or 2) the scalar pipeline solves for.
    """

    ky: float
    k1xz: complex
    k2xz: complex
    delta: complex
    loss: float
    gamma1: float
    gamma2: float
    wave: int = 1

    @property
    def kxz(self) -> complex:
        return self.k1xz if self.wave == 1 else self.k2xz

    @property
    def gamma(self) -> float:
        return self.gamma1 if self.wave == 1 else self.gamma2

    @property
    def kxz_lossless(self) -> float:
        return float(self.kxz.real)

    def mirrored(self) -> "PropagationContext":
        """Same context, solving for the right-handed partial wave Q2y."""
        if (self.gamma2 ** 2 - self.ky ** 2) <= 0:
            raise EvanescentPartialWave(
                f"k2xz^2 = {self.gamma2 ** 2 - self.ky ** 2:.6g} <= 0; Q2 partial wave is evanescent"
            )
        return replace(self, wave=2)

    def with_loss(self, loss: float) -> "PropagationContext":
        return propagation_context_from_gammas(self.gamma1, self.gamma2, self.ky, loss, wave=self.wave)


def coupling_delta(gamma1: float, gamma2: float, ky: float) -> complex:
    """Boundary coupling constant ``delta`` of the impedance-type condition."""
    if ky == 0:
        raise DecoupledCase("ky = 0: polarizations decouple, delta undefined")
    k1sq = gamma1 ** 2 - ky ** 2
    k2sq = gamma2 ** 2 - ky ** 2
    if abs(k2sq - k1sq) <= 1e-14 * max(abs(k1sq), abs(k2sq), 1e-300):
        raise AchiralDegenerate("k1xz^2 == k2xz^2 (gamma1 == gamma2): delta is singular")
    return (gamma2 * k1sq + gamma1 * k2sq) / (1j * ky * (k2sq - k1sq))


def propagation_context_from_gammas(gamma1, gamma2, ky, loss=0.0, wave=1) -> PropagationContext:
    if loss < 0 or not np.isfinite(loss):
        raise ConfigError(f"loss must be >= 0, got {loss!r}")
    delta = coupling_delta(gamma1, gamma2, ky)
    k1sq = gamma1 ** 2 - ky ** 2
    k2sq = gamma2 ** 2 - ky ** 2
    if k1sq <= 0:
        raise EvanescentPartialWave(f"k1xz^2 = {k1sq:.6g} <= 0; Q1 partial wave is evanescent")
    k1 = complex(math.sqrt(k1sq), -loss)
    k2 = complex(math.sqrt(k2sq), -loss) if k2sq > 0 else complex(0.0, -math.sqrt(-k2sq) - loss)
    ctx = PropagationContext(ky=float(ky), k1xz=k1, k2xz=k2, delta=complex(delta), loss=float(loss),
                             gamma1=float(gamma1), gamma2=float(gamma2))
    return ctx.mirrored() if wave == 2 else ctx


def propagation_context(m: DerivedMedium, ky: float, loss: float = 0.0) -> PropagationContext:
    return propagation_context_from_gammas(m.gamma1, m.gamma2, ky, loss)


@dataclass(frozen=True)
class BeltramiPair:
    Q1: np.ndarray
    Q2: np.ndarray


def beltrami_from_eh(E, H, m: DerivedMedium) -> BeltramiPair:
    E = np.asarray(E, dtype=complex)
    H = np.asarray(H, dtype=complex)
    a = m.eta1 / (m.eta1 + m.eta2)
    return BeltramiPair(Q1=a * (E + 1j * m.eta2 * H), Q2=a * (H + 1j * E / m.eta1))


def eh_from_beltrami(q: BeltramiPair, m: DerivedMedium):
    # closed-form inverse of the 2x2 map above
    E = q.Q1 - 1j * m.eta2 * q.Q2
    H = q.Q2 - 1j * q.Q1 / m.eta1
    return E, H
