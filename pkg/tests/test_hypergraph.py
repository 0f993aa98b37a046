from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import hypergraphs
from hyperforest import hypergraph as hg
from hyperforest.errors import CapExceeded, DuplicateVertices, LengthMismatch, OverlappingBlocks, ParseError
from hyperforest.hypergraph import Hypergraph, complete_graph, path_graph
from hyperforest.matrixtree.laplacian import principal_minor_trees
from hyperforest.ring import ONE, Polynomial, poly_prod, var

lam, w = var("lambda"), var("w")


def berge_acyclic(G: Hypergraph, mask: int) -> bool:
    """Independent oracle: the vertex-edge incidence graph has no cycle."""
    edges = [G.edges[k] for k in range(G.m) if mask >> k & 1]
    nodes = G.n + len(edges)
    adj = {x: [] for x in range(nodes)}
    for k, e in enumerate(edges):
        for v in e:
            adj[v].append(G.n + k)
            adj[G.n + k].append(v)
    seen = set()
    for root in range(nodes):
        if root in seen:
            continue
        stack = [(root, -1)]
        while stack:
            x, parent = stack.pop()
            if x in seen:
                return False
            seen.add(x)
            stack.extend((y, x) for y in adj[x] if y != parent)
    return True


def test_components_examples():
    K3 = complete_graph(3)
    assert hg.components(K3, 0) == [(0,), (1,), (2,)]
    assert hg.components(Hypergraph(3, ((0, 1, 2),)), 1) == [(0, 1, 2)]
    assert hg.components(Hypergraph(5, ((0, 1), (2, 3))), 3) == [(0, 1), (2, 3), (4,)]


def test_classify_examples():
    K3 = complete_graph(3)
    assert hg.classify(K3, 0b111).kind == hg.UNICYCLIC_MIX
    assert hg.classify(K3, 0b111).components[0].excess == 1
    assert hg.classify(K3, 0b011).kind == hg.HYPERFOREST
    G = Hypergraph(3, ((0, 1, 2), (0, 1)))
    assert hg.classify(G, 0b11).components[0].excess == 1
    assert hg.classify(G, 0b11).kind == hg.UNICYCLIC_MIX
    K4 = complete_graph(4)
    assert hg.classify(K4, (1 << 6) - 1).kind == hg.OTHER


def test_enumeration_examples():
    assert len(hg.enumerate_spanning_hyperforests(complete_graph(3))) == 7
    assert len(hg.enumerate_spanning_hyperforests(Hypergraph(3, ((0, 1, 2),)))) == 2
    assert len(hg.spanning_hypertrees(complete_graph(4))) == 16


def test_edge_cap():
    G = complete_graph(8)  # 28 edges
    with pytest.raises(CapExceeded) as exc:
        hg.enumerate_spanning_hyperforests(G)
    assert exc.value.cap == "edge"
    assert len(list(hg.iter_subsets(complete_graph(4), max_edges=6))) == 64


def test_forest_weight_sum_examples():
    K3 = complete_graph(3)
    assert hg.forest_weight_sum(K3, 1, lam, lam) == lam ** 3 + lam ** 2 * 3 + lam * 3
    E = Hypergraph(3, ((0, 1, 2),))
    assert hg.forest_weight_sum(E, [w], lam, lam) == lam ** 3 + w * lam
    ts = [var(f"t_{i}") for i in range(4)]
    assert hg.forest_weight_sum(complete_graph(4), 0, ts, lam) == poly_prod(ts)


def test_constrained_examples():
    K3 = complete_graph(3)
    assert hg.constrained_forest_sum(K3, 1, lam, [(0, 1)]) == lam ** 2 + lam * 2
    assert hg.constrained_forest_sum(K3, None, lam, ()) == hg.forest_weight_sum(K3, None, lam, lam)
    E = Hypergraph(3, ((0, 1, 2),))
    assert hg.constrained_forest_sum(E, [w], lam, [(0, 1, 2)]) == lam
    with pytest.raises(OverlappingBlocks):
        hg.constrained_forest_sum(K3, 1, lam, [(0, 1), (1, 2)])


def _differentiation_route(G: Hypergraph, blocks, lam):
    """Adjoin each block as an edge with a fresh weight and read off the
    coefficient of the product of those weights."""
    big = [b for b in blocks if len(b) >= 2]
    names = [f"c_{k}" for k in range(len(big))]
    H = Hypergraph(G.n, G.edges + tuple(big), G.weights + tuple(names))
    total = hg.constrained_forest_sum(H, None, lam, ())
    for name in names:
        total = total.coefficient(name, 1)
    return total


@given(hypergraphs(n_max=5, m_max=4), st.data())
def test_constrained_matches_differentiation(G, data):
    verts = data.draw(st.permutations(range(G.n)))
    cut = data.draw(st.integers(0, G.n))
    size = data.draw(st.integers(2, 3))
    blocks = [tuple(sorted(verts[i:i + size])) for i in range(0, cut - size + 1, size)]
    blocks = [b for b in blocks if b not in G.edges]
    assert hg.constrained_forest_sum(G, None, lam, blocks) == _differentiation_route(G, blocks, lam)


def test_matched_examples():
    K2 = Hypergraph(2, ((0, 1),))
    assert hg.matched_forest_sum(K2, 1, lam, lam, (0,), (1,)) == ONE
    G = complete_graph(3)
    assert hg.matched_forest_sum(G, None, None, None, (), ()) == hg.forest_weight_sum(G)
    # forests on 0-1-2 matched for I = (0, 2), J = (2, 0): the empty forest
    # (factor lambda at vertex 1) and the two single edges, all with sign -1;
    # the full path puts both I-vertices in one block and is not matched
    P = path_graph(3)
    assert hg.matched_forest_sum(P, 1, lam, lam, (0, 2), (2, 0)) == -lam - 2


def test_matched_errors():
    K2 = Hypergraph(2, ((0, 1),))
    with pytest.raises(LengthMismatch):
        hg.matched_forest_sum(K2, 1, lam, lam, (0,), ())
    with pytest.raises(DuplicateVertices):
        hg.matched_forest_sum(K2, 1, lam, lam, (0, 0), (0, 1))


def test_parse_errors():
    with pytest.raises(ParseError, match="hyperedge must have ≥ 2 vertices"):
        Hypergraph.from_json({"n": 2, "edges": [[0]]})
    with pytest.raises(ParseError):
        Hypergraph.from_json({"n": 2, "edges": [[0, 1], [1, 0]]})
    with pytest.raises(ParseError):
        Hypergraph.from_json({"n": 2, "edges": [[0, 2]]})
    with pytest.raises(ParseError):
        Hypergraph.from_json("not json")
    with pytest.raises(ParseError):
        Hypergraph.from_json({"edges": []})


def test_json_round_trip():
    G = Hypergraph.from_json({"n": 4, "edges": [[0, 1], [1, 2, 3]], "weights": {"0": "w_{0,1}", "1": "w_{1,2,3}"}})
    assert G.weights == ("w_{0,1}", "w_{1,2,3}")
    assert Hypergraph.from_json(G.to_json()) == G
    H = Hypergraph(3, ((0, 1),), ("a",))
    assert Hypergraph.from_json(H.to_json()).weights == ("a",)


@given(hypergraphs(n_max=5, m_max=6, sizes=(2, 3, 4)))
def test_excess_criterion_matches_acyclicity(G):
    for mask in range(1 << G.m):
        assert hg.is_hyperforest(G, mask) == berge_acyclic(G, mask)


@given(hypergraphs(n_max=7, m_max=8, sizes=(2,)))
def test_tree_count_is_a_laplacian_minor(G):
    trees = len(hg.spanning_hypertrees(G))
    assert principal_minor_trees(G, (G.n - 1,), 1) == Polynomial.const(trees)


def _connected_small():
    for n in range(2, 6):
        pool = [c for s in (2, 3) for c in combinations(range(n), s)]
        for m in range(1, 5):
            for es in combinations(pool, m):
                G = Hypergraph(n, es)
                if hg.is_connected(G):
                    yield G


def test_construction_sequences():
    count = 0
    for G in _connected_small():
        seq = hg.construction_sequence(G)
        assert seq is not None and len(seq) == G.m
        count += 1
        if hg.is_hyperforest(G, (1 << G.m) - 1):
            assert all(meet == 1 for _, meet in seq[1:])
    assert count > 0
    assert hg.construction_sequence(Hypergraph(4, ((0, 1), (2, 3)))) is None


@given(hypergraphs(n_max=5, m_max=5))
def test_lambda_degree_range(G):
    p = hg.forest_weight_sum(G, None, lam, lam)
    kmin = min(r.k for r in hg.enumerate_spanning_hyperforests(G))
    assert p.degree("lambda") == G.n
    assert p.min_degree("lambda") == kmin
