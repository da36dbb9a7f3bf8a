import math

import numpy as np
import pytest

from bwh.incident import source_spec
from bwh.medium import propagation_context_from_gammas
from bwh.solver import solve

PHI0 = -0.75 * math.pi


@pytest.fixture(scope="session")
def ctx():
    return propagation_context_from_gammas(2.0, 1.5, 1.0, loss=0.02)


@pytest.fixture(scope="session")
def src(ctx):
    return source_spec(ctx, r0=1000.0, phi0=PHI0)


@pytest.fixture(scope="session")
def sol(ctx, src):
    return solve(ctx, src)


@pytest.fixture(scope="session")
def kernel(sol):
    return sol.kernel


@pytest.fixture
def rng():
    return np.random.default_rng(42)
