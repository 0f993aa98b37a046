from __future__ import annotations

from hypothesis import settings, strategies as st

from hyperforest.grassmann import GrassmannElement
from hyperforest.ring import Polynomial, var

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SYMBOLS = ["lambda", "t_0", "t_1", "w_{0,1}", "q"]

coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, max_terms: int = 4, max_exp: int = 2):
    p = Polynomial.const(0)
    for _ in range(draw(st.integers(0, max_terms))):
        mono = {s: draw(st.integers(0, max_exp)) for s in draw(st.sets(st.sampled_from(SYMBOLS), max_size=3))}
        p = p + Polynomial.monomial(mono, draw(coefs))
    return p


@st.composite
def grassmann_elements(draw, n: int = 3, max_terms: int = 4, coeffs=None):
    d = {}
    for _ in range(draw(st.integers(0, max_terms))):
        key = draw(st.integers(0, (1 << (2 * n)) - 1))
        c = draw(coeffs) if coeffs is not None else Polynomial.const(draw(st.integers(-3, 3))) + var("lambda").scale(draw(st.integers(-2, 2)))
        d[key] = c
    return GrassmannElement(n, d)


@st.composite
def hypergraphs(draw, n_max: int = 5, m_max: int = 5, sizes=(2, 3)):
    from itertools import combinations

    from hyperforest.hypergraph import Hypergraph

    n = draw(st.integers(2, n_max))
    pool = [c for s in sizes if s <= n for c in combinations(range(n), s)]
    edges = draw(st.lists(st.sampled_from(pool), max_size=m_max, unique=True))
    return Hypergraph(n, tuple(sorted(edges)))


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {label}")
