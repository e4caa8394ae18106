import random

import pytest
from hypothesis import strategies as st

from pinv.exterior import ExtElement, SkewForm

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20261016)


@st.composite
def ext_elements(draw, rank=None, max_terms=5, coef=5):
    if rank is None:
        rank = draw(st.integers(0, 6))
    masks = draw(st.lists(st.integers(0, (1 << rank) - 1), max_size=max_terms))
    coefs = draw(st.lists(st.integers(-coef, coef), min_size=len(masks), max_size=len(masks)))
    terms = {}
    for m, c in zip(masks, coefs):
        terms[m] = terms.get(m, 0) + c
    return ExtElement(rank, terms)


@st.composite
def skew_forms(draw, q=None, bound=4):
    if q is None:
        q = draw(st.integers(0, 4))
    n = 2 * q
    upper = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            upper[(i, j)] = draw(st.integers(-bound, bound))
    return SkewForm.from_upper(q, upper)
