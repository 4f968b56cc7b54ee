from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from quivermod.linalg import GF, QQ, Matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240607)


small_ints = st.integers(min_value=-4, max_value=4)
small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def rational_matrices(draw, max_rows=4, max_cols=4, min_rows=0, min_cols=0, square=False, entries=small_fracs):
    r = draw(st.integers(min_rows, max_rows))
    c = r if square else draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(QQ, rows, r, c)


@st.composite
def prime_matrices(draw, p=5, max_rows=4, max_cols=4):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(GF(p), rows, r, c)


def to_sympy(m: Matrix):
    import sympy
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(m.entries[i][j].numerator,
                                                                    m.entries[i][j].denominator))


# acceptance results, filled by test_acceptance and echoed in the terminal summary
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, float, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, ok, elapsed, limit = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  "
                                    f"({elapsed:.2f} s, limit {limit:g} s)")
