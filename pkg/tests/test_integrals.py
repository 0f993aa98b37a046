from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from conftest import hypergraphs
from hyperforest import hypergraph as hg
from hyperforest.errors import CapExceeded, DuplicateVertices, LengthMismatch, UnknownIdentity
from hyperforest.hypergraph import Hypergraph, complete_graph, edgeless, path_graph
from hyperforest.integrals import (
    IDENTITIES,
    ActionSpec,
    CorrelatorSpec,
    Instance,
    corr_unnormalized,
    verify_identity,
    z_partition,
)
from hyperforest.matrixtree.determinants import det
from hyperforest.matrixtree.laplacian import laplacian_graph
from hyperforest.ring import ONE, Polynomial, poly_prod, var

lam = var("lambda")
t0, t1, w = var("t_0"), var("t_1"), var("w")


def test_edgeless():
    ts = [var(f"t_{i}") for i in range(3)]
    assert z_partition(ActionSpec.build(edgeless(3), ts)) == poly_prod(ts)


def test_k3_unit_weights():
    spec = ActionSpec.build(complete_graph(3), None, 1)
    assert z_partition(spec) == lam ** 3 + lam ** 2 * 3 + lam * 3
    assert z_partition(spec) == hg.forest_weight_sum(spec.G, 1, lam, lam)


def test_k2_symbolic():
    spec = ActionSpec.build(Hypergraph(2, ((0, 1),)), [t0, t1], [w])
    assert z_partition(spec) == t0 * t1 + w * (t0 + t1 - lam)


def test_correlator_examples():
    K2 = Hypergraph(2, ((0, 1),))
    spec = ActionSpec.build(K2, None, 1)
    assert corr_unnormalized(spec, CorrelatorSpec()) == z_partition(spec)
    assert corr_unnormalized(spec, CorrelatorSpec((0,), (1,))) == ONE
    assert corr_unnormalized(spec, CorrelatorSpec((0,), (0,))) == lam + 1


def test_path_correlator_with_swap():
    spec = ActionSpec.build(path_graph(3), None, 1)
    assert corr_unnormalized(spec, CorrelatorSpec((0, 2), (2, 0))) == -lam - 2


def test_correlator_spec_validation():
    with pytest.raises(LengthMismatch):
        CorrelatorSpec((0,), ())
    with pytest.raises(DuplicateVertices):
        CorrelatorSpec((0, 0), (1, 2))


def test_vertex_cap():
    spec = ActionSpec.build(edgeless(5))
    with pytest.raises(CapExceeded):
        z_partition(spec, max_n=4)


@given(hypergraphs(n_max=5, m_max=5, sizes=(2, 3, 4)))
def test_partition_function_symbolic(G):
    spec = ActionSpec.symbolic(G)
    assert z_partition(spec) == hg.forest_weight_sum(G, list(spec.w), list(spec.t), list(spec.lam))


@given(hypergraphs(n_max=5, m_max=5), st.data())
def test_correlator_antisymmetric(G, data):
    I = tuple(data.draw(st.lists(st.integers(0, G.n - 1), min_size=2, max_size=2, unique=True)))
    J = tuple(data.draw(st.lists(st.integers(0, G.n - 1), min_size=2, max_size=2, unique=True)))
    spec = ActionSpec.symbolic(G)
    a = corr_unnormalized(spec, CorrelatorSpec(I, J))
    assert corr_unnormalized(spec, CorrelatorSpec(I[::-1], J)) == -a
    assert corr_unnormalized(spec, CorrelatorSpec(I, J[::-1])) == -a


def test_unmatched_correlator_vanishes():
    # two components; I has both vertices in the first, J has both in the second
    G = Hypergraph(4, ((0, 1), (2, 3)))
    spec = ActionSpec.symbolic(G)
    assert corr_unnormalized(spec, CorrelatorSpec((0, 1), (2, 3))).is_zero()
    assert corr_unnormalized(spec, CorrelatorSpec((0,), (2,))).is_zero()


@given(hypergraphs(n_max=5, m_max=6, sizes=(2,)))
def test_graph_case_is_a_determinant(G):
    # with lambda_A = 0 the action is quadratic: Z = det(diag(t) + L)
    ts = [var(f"t_{i}") for i in range(G.n)]
    spec = ActionSpec.build(G, ts, None, 0)
    L = laplacian_graph(G)
    M = [[L[i][j] + (ts[i] if i == j else 0) for j in range(G.n)] for i in range(G.n)]
    assert z_partition(spec) == det(M)


@pytest.mark.parametrize("name", sorted(IDENTITIES))
def test_identities_on_k3(name):
    K3 = complete_graph(3)
    I, J = ((0,), (2,)) if name == "two-point" else ((0, 1), (1, 2))
    C = ((0, 1),) if name == "constrained-forests" else ()
    inst = Instance(ActionSpec.symbolic(K3), I, J, C)
    rep = verify_identity(name, inst)
    assert rep["equal"], name
    assert set(rep) == {"identity", "instance", "equal", "lhs", "rhs", "millis"}


def test_two_point_on_path():
    inst = Instance(ActionSpec.symbolic(path_graph(3)), (0,), (2,))
    assert verify_identity("two-point", inst)["equal"]


def test_constrained_uses_block_factor():
    inst = Instance(ActionSpec.build(complete_graph(3), None, 1), C=((0, 1),))
    rep = verify_identity("constrained-forests", inst)
    assert Polynomial.from_json(rep["lhs"]) == lam ** 2 + lam * 2


def test_unknown_identity():
    inst = Instance(ActionSpec.build(complete_graph(2)))
    with pytest.raises(UnknownIdentity):
        verify_identity("bogus", inst)


def test_instance_json_round_trip():
    inst = Instance(ActionSpec.symbolic(complete_graph(3)), (0,), (1,), ((1, 2),))
    again = Instance.from_json(json.loads(json.dumps(inst.to_json())))
    assert again == inst
