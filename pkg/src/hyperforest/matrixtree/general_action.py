"""The general hyperedge action with independent per-monomial weights.

For each hyperedge A the action is

    S_A = ws_A tau_A + sum_i w_{A;i} tau_{A-i} + sum_{i != j} w_{A;ij} psi_i psibar_j tau_{A-{i,j}}

and the integral of O_{I,J} exp(sum t_i psibar_i psi_i + sum_A S_A)
is compared with a sum over oriented configurations: spanning
subhypergraphs whose components are trees (with a root vertex, a root
hyperedge, or a source-to-sink path of "dashed" hyperedges) or
unicyclics (with an oriented cycle), every other hyperedge pointing
towards its component's root structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

from ..errors import CapExceeded, NotAGraph
from ..grassmann import GrassmannElement, gexp, gmul, gprod, integrate_product
from ..hypergraph import (
    Hypergraph,
    _check_ij,
    _edge_map,
    _perm_sign,
    _vertex_map,
    classify,
    edge_weights,
    matching_of,
)
from ..operators import tau
from ..ring import ONE, ZERO, Polynomial, poly_sum, var
from .determinants import det

Edge = Tuple[int, ...]


def _idx(e: Edge) -> str:
    return ",".join(map(str, e))


@dataclass(frozen=True)
class GeneralAction:
    """Weights keyed by edge index: ``star[k]``, ``point[k][i]`` and ``dash[k][(i, j)]``."""

    G: Hypergraph
    t: Tuple[Polynomial, ...]
    star: Tuple[Polynomial, ...]
    point: Tuple[Mapping[int, Polynomial], ...]
    dash: Tuple[Mapping[Tuple[int, int], Polynomial], ...]

    @classmethod
    def symbolic(cls, G: Hypergraph) -> "GeneralAction":
        """Every weight an independent symbol: ws_{A}, w_{A;i}, w_{A;i,j} and t_i."""
        t = tuple(var(f"t_{i}") for i in range(G.n))
        star = tuple(var(f"ws_{{{_idx(e)}}}") for e in G.edges)
        point = tuple({i: var(f"w_{{{_idx(e)};{i}}}") for i in e} for e in G.edges)
        dash = tuple(
            {(i, j): var(f"w_{{{_idx(e)};{i},{j}}}") for i in e for j in e if i != j} for e in G.edges
        )
        return cls(G, t, star, point, dash)

    @classmethod
    def symmetric(cls, G: Hypergraph, t=None, w=None, star=None) -> "GeneralAction":
        """w_{A;i} = w_{A;ij} = w_A; ``star`` defaults to 0."""
        wv = edge_weights(G, w)
        tv = tuple(_vertex_map(G.n, t, lambda i: var(f"t_{i}")))
        sv = tuple(_edge_map(G, star, lambda k: ZERO))
        point = tuple({i: x for i in e} for e, x in zip(G.edges, wv))
        dash = tuple({(i, j): x for i in e for j in e if i != j} for e, x in zip(G.edges, wv))
        return cls(G, tv, sv, point, dash)

    def substitute(self, bindings) -> "GeneralAction":
        sub = lambda p: p.substitute(bindings)
        return GeneralAction(
            self.G,
            tuple(map(sub, self.t)),
            tuple(map(sub, self.star)),
            tuple({i: sub(p) for i, p in m.items()} for m in self.point),
            tuple({ij: sub(p) for ij, p in m.items()} for m in self.dash),
        )

    def star_hat(self, k: int) -> Polynomial:
        """ws_A, corrected by w_{A;i} w_{A;j} - w_{A;ij} w_{A;ji} when A = {i, j}."""
        e = self.G.edges[k]
        if len(e) != 2:
            return self.star[k]
        i, j = e
        return self.star[k] + self.point[k][i] * self.point[k][j] - self.dash[k][(i, j)] * self.dash[k][(j, i)]


def edge_action(act: GeneralAction, k: int, hat: bool = False) -> GrassmannElement:
    n = act.G.n
    e = act.G.edges[k]
    A = set(e)
    s = tau(A, n).scale(act.star_hat(k) if hat else act.star[k])
    for i in e:
        s = s + tau(A - {i}, n).scale(act.point[k][i])
    for i in e:
        for j in e:
            if i != j:
                ps = gmul(GrassmannElement.psi(i, n), GrassmannElement.psibar(j, n))
                s = s + gmul(ps, tau(A - {i, j}, n)).scale(act.dash[k][(i, j)])
    return s


def general_action_integral(
    act: GeneralAction, I: Sequence[int] = (), J: Sequence[int] = (), use_hat: bool = False, max_n: int = 16
) -> Polynomial:
    """Grassmann side.  Each exp(S_A) is the exponential series unless
    ``use_hat``, which uses 1 + S_A with the corrected ws_A instead."""
    _check_ij(I, J)
    G = act.G
    n = G.n
    if n > max_n:
        raise CapExceeded("vertex", n, max_n)
    one = GrassmannElement.one(n)
    factors = []
    for k in range(G.m):
        if use_hat:
            f = one + edge_action(act, k, hat=True)
        else:
            f = gexp(edge_action(act, k))
        factors.append((G.edge_mask(k), f))
    gens = []
    for i, j in zip(I, J):
        gens += [GrassmannElement.psibar(i, n), GrassmannElement.psi(j, n)]
    prefix = gprod(gens, n) if gens else None
    return integrate_product(factors, n, dict(enumerate(act.t)), prefix)


# -- oriented configurations --------------------------------------------

ROOT_VERTEX = "root-vertex"
ROOT_HYPEREDGE = "root-hyperedge"
PATH = "path"
DASHED_CYCLE = "dashed-cycle"
POINTING_CYCLE = "pointing-cycle"
# only used by the variant enumerator that spells out the 2-edge corrections
POINTING_PAIR = "pointing-pair"
DASHED_PAIR = "dashed-pair"


@dataclass(frozen=True)
class RootStructure:
    kind: str
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]


@dataclass(frozen=True)
class ComponentConfig:
    vertices: Tuple[int, ...]
    root: RootStructure
    orientation: Tuple[Tuple[int, int], ...]  # (edge index, outgoing vertex)
    weight: Polynomial


@dataclass(frozen=True)
class OrientedConfig:
    edge_mask: int
    components: Tuple[ComponentConfig, ...]
    pi: Tuple[int, ...]
    sign: int

    @property
    def weight(self) -> Polynomial:
        p = Polynomial.const(self.sign)
        for c in self.components:
            p = p * c.weight
        return p


def _orient(G: Hypergraph, covered: set, edges: Sequence[int], vertices: Sequence[int]):
    """Point every edge toward ``covered``; None unless this saturates each vertex exactly once."""
    covered = set(covered)
    todo = list(edges)
    out = []
    while todo:
        for idx, k in enumerate(todo):
            meet = [v for v in G.edges[k] if v in covered]
            if len(meet) > 1:
                return None
            if len(meet) == 1:
                out.append((k, meet[0]))
                covered.update(G.edges[k])
                todo.pop(idx)
                break
        else:
            return None
    if covered != set(vertices):
        return None
    return tuple(sorted(out))


def _simple_paths(G: Hypergraph, edges: Sequence[int], s: int, u: int):
    """(vertex sequence, edge sequence) of paths s -> u using distinct edges and vertices."""
    out = []

    def walk(verts, used):
        v = verts[-1]
        if v == u and used:
            out.append((tuple(verts), tuple(used)))
            return
        for k in edges:
            if k in used or v not in G.edges[k]:
                continue
            for x in G.edges[k]:
                if x != v and x not in verts:
                    walk(verts + [x], used + [k])

    walk([s], [])
    return out


def _oriented_cycles(G: Hypergraph, edges: Sequence[int]):
    """Oriented cycles (i_0, A_1, ..., i_l = i_0), l >= 2, each listed once
    per orientation by starting from its smallest vertex."""
    out = []
    vs = sorted({v for k in edges for v in G.edges[k]})
    for start in vs:

        def walk(verts, used):
            v = verts[-1]
            for k in edges:
                if k in used or v not in G.edges[k]:
                    continue
                for x in G.edges[k]:
                    if x == v:
                        continue
                    if x == start and len(used) >= 1:
                        out.append((tuple(verts), tuple(used + [k])))
                    elif x > start and x not in verts:
                        walk(verts + [x], used + [k])

        walk([start], [])
    return out


def _disjoint_union(G: Hypergraph, edges: Sequence[int], shared: int) -> Optional[set]:
    """Vertex union of ``edges`` if its size equals sum |A| - shared (no extra overlaps)."""
    U = set()
    total = 0
    for k in edges:
        U.update(G.edges[k])
        total += len(G.edges[k])
    return U if len(U) == total - shared else None


def component_options(
    act: GeneralAction,
    vertices: Sequence[int],
    edges: Sequence[int],
    excess: int,
    I: Sequence[int],
    J: Sequence[int],
    split_hat: bool = False,
) -> List[ComponentConfig]:
    G = act.G
    sI = [v for v in vertices if v in I]
    sJ = [v for v in vertices if v in J]
    opts: List[ComponentConfig] = []

    def pointing(orient) -> Polynomial:
        p = ONE
        for k, v in orient:
            p = p * act.point[k][v]
        return p

    def add(root: RootStructure, covered, rest, w):
        orient = _orient(G, covered, rest, vertices)
        if orient is not None and w:
            opts.append(ComponentConfig(tuple(vertices), root, orient, w * pointing(orient)))

    if excess == 0 and not sI and not sJ:
        for v in vertices:
            add(RootStructure(ROOT_VERTEX, (v,), ()), {v}, edges, act.t[v])
        for k in edges:
            rest = [x for x in edges if x != k]
            if split_hat and len(G.edges[k]) == 2:
                i, j = G.edges[k]
                for kind, w in (
                    (ROOT_HYPEREDGE, act.star[k]),
                    (POINTING_PAIR, act.point[k][i] * act.point[k][j]),
                    (DASHED_PAIR, -(act.dash[k][(i, j)] * act.dash[k][(j, i)])),
                ):
                    add(RootStructure(kind, G.edges[k], (k,)), set(G.edges[k]), rest, w)
            else:
                add(RootStructure(ROOT_HYPEREDGE, G.edges[k], (k,)), set(G.edges[k]), rest, act.star_hat(k))
    elif excess == 0 and len(sI) == 1 and len(sJ) == 1:
        s, u = sI[0], sJ[0]
        if s == u:
            add(RootStructure(ROOT_VERTEX, (s,), ()), {s}, edges, ONE)
        else:
            for verts, path in _simple_paths(G, edges, s, u):
                cov = _disjoint_union(G, path, len(path) - 1)
                if cov is None:
                    continue
                w = ONE
                for a, k in enumerate(path):
                    w = w * act.dash[k][(verts[a], verts[a + 1])]
                rest = [x for x in edges if x not in path]
                add(RootStructure(PATH, verts, path), cov, rest, w)
    elif excess == 1 and not sI and not sJ:
        for verts, cyc in _oriented_cycles(G, edges):
            cov = _disjoint_union(G, cyc, len(cyc))
            if cov is None:
                continue
            ring = verts + (verts[0],)
            bos = ONE
            fer = ONE
            for a, k in enumerate(cyc):
                bos = bos * act.point[k][ring[a + 1]]
                fer = fer * act.dash[k][(ring[a], ring[a + 1])]
            rest = [x for x in edges if x not in cyc]
            add(RootStructure(POINTING_CYCLE, verts, cyc), cov, rest, bos)
            add(RootStructure(DASHED_CYCLE, verts, cyc), cov, rest, -fer)
    return opts


def oriented_configs(
    act: GeneralAction, I: Sequence[int] = (), J: Sequence[int] = (), split_hat: bool = False, max_edges: int = 24
) -> Iterator[OrientedConfig]:
    """Every configuration with nonzero weight, edge subsets in mask-ascending order."""
    for mask, comps, pi, sign in _admissible_subsets(act, I, J, max_edges):
        per = [component_options(act, c.vertices, c.edges, c.excess, I, J, split_hat) for c in comps]
        for choice in product(*per):
            yield OrientedConfig(mask, tuple(choice), tuple(pi), sign)


def _admissible_subsets(act: GeneralAction, I, J, max_edges):
    _check_ij(I, J)
    G = act.G
    if G.m > max_edges:
        raise CapExceeded("edge", G.m, max_edges)
    for mask in range(1 << G.m):
        rec = classify(G, mask)
        if any(c.excess > 1 for c in rec.components):
            continue
        m = matching_of(rec.partition, I, J)
        if m is None:
            continue
        pi, _ = m
        if any(c.excess == 1 and any(v in I or v in J for v in c.vertices) for c in rec.components):
            continue
        yield mask, rec.components, pi, _perm_sign(pi)


def oriented_config_sum(
    act: GeneralAction, I: Sequence[int] = (), J: Sequence[int] = (), split_hat: bool = False, max_edges: int = 24
) -> Polynomial:
    """Combinatorial side: the configuration sum, factorized per component."""
    parts = []
    for mask, comps, pi, sign in _admissible_subsets(act, I, J, max_edges):
        p = Polynomial.const(sign)
        for c in comps:
            opts = component_options(act, c.vertices, c.edges, c.excess, I, J, split_hat)
            p = p * poly_sum(o.weight for o in opts)
            if not p:
                break
        parts.append(p)
    return poly_sum(parts)


def moon_matrix(act: GeneralAction) -> List[List[Polynomial]]:
    """M_ii = t_i + sum_k w_{{i,k};k}, M_ij = -w_{{i,j};ji}."""
    G = act.G
    if not G.is_graph():
        raise NotAGraph("two-matrix form needs a graph")
    M = [[ZERO] * G.n for _ in range(G.n)]
    for i in range(G.n):
        M[i][i] = act.t[i]
    for k, (i, j) in enumerate(G.edges):
        M[i][i] = M[i][i] + act.point[k][j]
        M[j][j] = M[j][j] + act.point[k][i]
        M[i][j] = M[i][j] - act.dash[k][(j, i)]
        M[j][i] = M[j][i] - act.dash[k][(i, j)]
    return M


def moon_check(act: GeneralAction) -> bool:
    """With ws_A = 0 and I = J = empty, the integral is det M."""
    zeroed = GeneralAction(act.G, act.t, tuple(ZERO for _ in act.star), act.point, act.dash)
    return general_action_integral(zeroed) == det(moon_matrix(zeroed))
