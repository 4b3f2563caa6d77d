import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from superplucker.galgebra import EVEN, ODD, GrassmannElement, zero

settings.register_profile(
    "repo", deadline=None, max_examples=30, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

GENS = 4

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def elements(draw, n=GENS, parity=None, invertible=False):
    """Random element of the Grassmann algebra on n generators."""
    out = zero(n)
    masks = range(1 << (n + 1))
    for m in draw(st.lists(st.sampled_from([m for m in masks if not m & 1]), max_size=5, unique=True)):
        if parity is not None and (m.bit_count() & 1) != parity:
            continue
        out = out + GrassmannElement(n, {m: draw(rationals)})
    if invertible:
        body = draw(rationals.filter(bool))
        out = out.soul + body
    return out


seeds = st.integers(min_value=0, max_value=10**6)


@pytest.fixture
def rng():
    return random.Random(1234)


# acceptance lines are collected here and printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[1].split(".")[0])):
            terminalreporter.write_line(line)


__all__ = ["EVEN", "ODD", "GENS", "elements", "seeds"]
