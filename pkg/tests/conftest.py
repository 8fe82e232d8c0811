import random

import pytest

from cyclowin.frames import script_frame, sigma_frame
from cyclowin.padic_rings import Lift, PrecisionCtx


@pytest.fixture(scope="session")
def ctx():
    """Small cyclotomic context shared by most tests."""
    return PrecisionCtx(p=3, N=3, M=10, r=1)


@pytest.fixture(scope="session")
def standard_ctx(ctx):
    return ctx.with_lift(Lift.STANDARD)


@pytest.fixture(scope="session")
def sigma(ctx):
    return sigma_frame(ctx)


@pytest.fixture(scope="session")
def script(ctx):
    return script_frame(ctx)


@pytest.fixture
def rng():
    return random.Random(20240607)
