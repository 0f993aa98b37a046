from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import grassmann_elements
from hyperforest.grassmann import PSIBAR, SUM, GrassmannElement as GE, gderiv, gmul, integrate_all
from hyperforest.operators import f_lambda, tau
from hyperforest.osp import (
    QMINUS,
    QPLUS,
    X0,
    XMINUS,
    XPLUS,
    OspOperator,
    apply,
    bracket,
    check_invariance,
    check_osp_relations,
    non_invariance_witness,
    partition_products_annihilated,
)
from hyperforest.ring import var

lam = var("lambda")


def op(kind, n):
    return OspOperator(kind, n, lam)


def subsets(n):
    return [frozenset(c) for r in range(n + 1) for c in combinations(range(n), r)]


def test_apply_examples():
    n = 3
    for A in subsets(n):
        assert apply(op(XPLUS, n), tau(A, n)).is_zero()
        assert apply(op(QMINUS, n), tau(A, n)) == gderiv(tau(A, n), PSIBAR, SUM)
    assert apply(op(X0, 1), GE.psibar(0, 1)) == GE.psibar(0, 1)
    assert apply(op(X0, 1), GE.psi(0, 1)) == -GE.psi(0, 1)


def test_parity():
    a = GE.psibar(0, 2)
    assert apply(op(QPLUS, 2), gmul(a, GE.psi(1, 2))).is_odd()
    assert apply(op(XMINUS, 2), a).is_odd()


def test_unknown_kind():
    with pytest.raises(ValueError):
        OspOperator("Y", 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_relations(n):
    report = check_osp_relations(n)
    assert len(report) == 12
    assert all(report.values()), report


def test_relation_instances():
    n = 2
    a = gmul(GE.psibar(0, n), GE.psibar(1, n))
    qp = op(QPLUS, n)
    assert bracket(qp, qp, a) == apply(op(XPLUS, n), a).scale(lam * 2)
    b = GE.psi(0, n)
    assert bracket(op(XPLUS, n), op(XMINUS, n), b) == -b


def test_annihilation_examples():
    assert apply(op(QPLUS, 1), f_lambda({0}, 1, lam)).is_zero()
    assert apply(op(QMINUS, 1), GE.one(1)).is_zero()
    f01 = f_lambda({0, 1}, 2, lam)
    assert apply(op(QPLUS, 2), f01).is_zero()
    n = 3
    A = {0, 1, 2}
    assert f_lambda(A, n, lam) == tau(A, n).scale(lam) + apply(op(QPLUS, n), apply(op(QMINUS, n), tau(A, n)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_invariance_report(n):
    rep = check_invariance(n, samples=10, seed=n)
    witness = rep.pop("non-invariance witness")
    assert all(rep.values()), rep
    assert witness is not None and witness["integral"] != "0"


def test_witness_value():
    w = non_invariance_witness(2)
    assert w["integral"] == "lambda*t_0 - lambda^2"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_partition_products(n):
    assert partition_products_annihilated(n, seed=n, trials=5)


@given(grassmann_elements(n=3, max_terms=6), st.sampled_from([QPLUS, QMINUS]))
def test_measure_invariant_at_lambda(F, q):
    assert integrate_all(apply(op(q, 3), F), lam).is_zero()


@given(grassmann_elements(n=2, max_terms=6), st.sampled_from([X0, XPLUS, XMINUS]))
def test_bosonic_generators_preserve_any_measure(F, kind):
    assert integrate_all(apply(op(kind, 2), F), var("t")).is_zero()


def test_measure_not_invariant_in_general():
    t = {0: var("t_0"), 1: lam}
    hit = any(
        not integrate_all(apply(op(QPLUS, 2), GE.monomial(k, 2, 1)), t).is_zero() for k in range(16)
    )
    assert hit
