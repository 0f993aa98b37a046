"""Hypergraphs, connected components and spanning-hyperforest enumeration.

Edge subsets are bitmasks over ``G.edges``.  A component's cyclomatic
excess is ``sum(|A| - 1) - |V_c| + 1``; a subset is a hyperforest exactly
when every component has excess 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import CapExceeded, DuplicateVertices, LengthMismatch, OverlappingBlocks, ParseError
from .ring import ONE, Polynomial, as_poly, poly_sum, var, weight_name

DEFAULT_EDGE_CAP = 24

HYPERFOREST = "hyperforest"
UNICYCLIC_MIX = "unicyclic-mix"
OTHER = "other"

Edge = Tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: Tuple[Edge, ...]
    weights: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ParseError("vertex count must be non-negative")
        edges = []
        seen = set()
        for e in self.edges:
            vs = tuple(sorted(set(int(v) for v in e)))
            if len(vs) != len(tuple(e)):
                raise ParseError(f"hyperedge {list(e)} repeats a vertex")
            if len(vs) < 2:
                raise ParseError("hyperedge must have ≥ 2 vertices")
            if vs[0] < 0 or vs[-1] >= self.n:
                raise ParseError(f"hyperedge {list(e)} out of range for n={self.n}")
            if vs in seen:
                raise ParseError(f"duplicate hyperedge {list(vs)}")
            seen.add(vs)
            edges.append(vs)
        object.__setattr__(self, "edges", tuple(edges))
        if not self.weights:
            object.__setattr__(self, "weights", tuple(weight_name("w", e) for e in edges))
        elif len(self.weights) != len(edges):
            raise ParseError("one weight name per hyperedge required")
        else:
            object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_mask(self, k: int) -> int:
        mask = 0
        for v in self.edges[k]:
            mask |= 1 << v
        return mask

    def weight_symbols(self) -> List[Polynomial]:
        return [var(w) for w in self.weights]

    def is_graph(self) -> bool:
        return all(len(e) == 2 for e in self.edges)

    def uniformity(self) -> Optional[int]:
        sizes = {len(e) for e in self.edges}
        return sizes.pop() if len(sizes) == 1 else None

    def sub(self, edge_mask: int) -> "Hypergraph":
        ks = [k for k in range(self.m) if edge_mask >> k & 1]
        return Hypergraph(self.n, tuple(self.edges[k] for k in ks), tuple(self.weights[k] for k in ks))

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        out = {"n": self.n, "edges": [list(e) for e in self.edges]}
        custom = {
            str(k): w for k, w in enumerate(self.weights) if w != weight_name("w", self.edges[k])
        }
        out["weights"] = {str(k): w for k, w in enumerate(self.weights)} if custom else {}
        return out

    @classmethod
    def from_json(cls, obj: Union[str, Mapping]) -> "Hypergraph":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, Mapping):
            raise ParseError("hypergraph JSON must be an object")
        try:
            n = obj["n"]
            raw_edges = obj["edges"]
        except KeyError as exc:
            raise ParseError(f"missing field {exc.args[0]!r}") from exc
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError("n must be an integer")
        if not isinstance(raw_edges, list) or not all(isinstance(e, list) for e in raw_edges):
            raise ParseError("edges must be a list of vertex lists")
        for e in raw_edges:
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
                raise ParseError("vertices must be integers")
        edges = tuple(tuple(e) for e in raw_edges)
        weights_obj = obj.get("weights") or {}
        if not isinstance(weights_obj, Mapping):
            raise ParseError("weights must be an object")
        names = []
        for k, e in enumerate(edges):
            name = weights_obj.get(str(k))
            if name is None:
                # weight names are generated from the sorted edge
                name = weight_name("w", sorted(e)) if len(set(e)) >= 2 else ""
            names.append(str(name))
        return cls(n, edges, tuple(names))


def complete_graph(n: int) -> Hypergraph:
    return Hypergraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> Hypergraph:
    return Hypergraph(n, tuple((i, i + 1) for i in range(n - 1)))


def edgeless(n: int) -> Hypergraph:
    return Hypergraph(n, ())


# -- components ---------------------------------------------------------


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def components(G: Hypergraph, edge_mask: int) -> List[Tuple[int, ...]]:
    """Connected components of (V, E'), each sorted, ordered by smallest vertex."""
    parent = list(range(G.n))
    for k in range(G.m):
        if edge_mask >> k & 1:
            e = G.edges[k]
            r = _find(parent, e[0])
            for v in e[1:]:
                s = _find(parent, v)
                if s != r:
                    parent[s] = r
    blocks: Dict[int, List[int]] = {}
    for v in range(G.n):
        blocks.setdefault(_find(parent, v), []).append(v)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def count_components(G: Hypergraph, edge_mask: int) -> int:
    return len(components(G, edge_mask))


@dataclass(frozen=True)
class ComponentRecord:
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    excess: int


@dataclass(frozen=True)
class ForestRecord:
    edge_mask: int
    components: Tuple[ComponentRecord, ...]
    kind: str

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def partition(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(c.vertices for c in self.components)

    def is_hyperforest(self) -> bool:
        return self.kind == HYPERFOREST


def classify(G: Hypergraph, edge_mask: int) -> ForestRecord:
    blocks = components(G, edge_mask)
    where = {}
    for b, vs in enumerate(blocks):
        for v in vs:
            where[v] = b
    edges_of: List[List[int]] = [[] for _ in blocks]
    rank: List[int] = [0] * len(blocks)
    for k in range(G.m):
        if edge_mask >> k & 1:
            b = where[G.edges[k][0]]
            edges_of[b].append(k)
            rank[b] += len(G.edges[k]) - 1
    comps = tuple(
        ComponentRecord(vs, tuple(edges_of[b]), rank[b] - len(vs) + 1) for b, vs in enumerate(blocks)
    )
    if all(c.excess == 0 for c in comps):
        kind = HYPERFOREST
    elif all(c.excess in (0, 1) for c in comps):
        kind = UNICYCLIC_MIX
    else:
        kind = OTHER
    return ForestRecord(edge_mask, comps, kind)


def is_hyperforest(G: Hypergraph, edge_mask: int) -> bool:
    return classify(G, edge_mask).kind == HYPERFOREST


def _check_cap(G: Hypergraph, max_edges: Optional[int]) -> None:
    cap = DEFAULT_EDGE_CAP if max_edges is None else max_edges
    if G.m > cap:
        raise CapExceeded("edge", G.m, cap)


def iter_subsets(G: Hypergraph, max_edges: Optional[int] = None) -> Iterator[int]:
    _check_cap(G, max_edges)
    return iter(range(1 << G.m))


def enumerate_spanning_hyperforests(G: Hypergraph, max_edges: Optional[int] = None) -> List[ForestRecord]:
    out = []
    for mask in iter_subsets(G, max_edges):
        rec = classify(G, mask)
        if rec.kind == HYPERFOREST:
            out.append(rec)
    return out


def spanning_hypertrees(G: Hypergraph, max_edges: Optional[int] = None) -> List[ForestRecord]:
    return [r for r in enumerate_spanning_hyperforests(G, max_edges) if r.k == 1]


# -- weight maps --------------------------------------------------------


def _edge_map(G: Hypergraph, values, default) -> List[Polynomial]:
    if values is None:
        return [default(k) for k in range(G.m)]
    if isinstance(values, Mapping):
        return [as_poly(values[k]) if k in values else default(k) for k in range(G.m)]
    if isinstance(values, (list, tuple)):
        return [as_poly(v) for v in values]
    c = as_poly(values)
    return [c] * G.m


def _vertex_map(n: int, values, default) -> List[Polynomial]:
    if values is None:
        return [default(i) for i in range(n)]
    if isinstance(values, Mapping):
        return [as_poly(values[i]) if i in values else default(i) for i in range(n)]
    if isinstance(values, (list, tuple)):
        return [as_poly(v) for v in values]
    c = as_poly(values)
    return [c] * n


def edge_weights(G: Hypergraph, weights=None) -> List[Polynomial]:
    """Per-edge weights; defaults to the hypergraph's weight symbols."""
    return _edge_map(G, weights, lambda k: var(G.weights[k]))


def edge_lambdas(G: Hypergraph, lam=None) -> List[Polynomial]:
    return _edge_map(G, lam, lambda k: var("lambda"))


def vertex_ts(n: int, t=None) -> List[Polynomial]:
    return _vertex_map(n, t, lambda i: var("lambda"))


def _forest_monomial(w: Sequence[Polynomial], mask: int) -> Polynomial:
    p = ONE
    k = 0
    while mask:
        if mask & 1:
            p = p * w[k]
        mask >>= 1
        k += 1
    return p


def _rooted_factor(G: Hypergraph, comp: ComponentRecord, t: Sequence[Polynomial], lam: Sequence[Polynomial]) -> Polynomial:
    terms = [t[i] for i in comp.vertices]
    terms += [-(lam[k].scale(len(G.edges[k]) - 1)) for k in comp.edges]
    return poly_sum(terms)


def forest_weight_sum(
    G: Hypergraph,
    weights=None,
    t=None,
    lam=None,
    max_edges: Optional[int] = None,
) -> Polynomial:
    """Sum over spanning hyperforests F of prod w_A times, per component,
    (sum of t_i over its vertices - sum of (|A|-1) lambda_A over its edges)."""
    w = edge_weights(G, weights)
    tv = vertex_ts(G.n, t)
    lv = edge_lambdas(G, lam)
    parts = []
    for rec in enumerate_spanning_hyperforests(G, max_edges):
        p = _forest_monomial(w, rec.edge_mask)
        for comp in rec.components:
            p = p * _rooted_factor(G, comp, tv, lv)
            if not p:
                break
        parts.append(p)
    return poly_sum(parts)


def constrained_forest_sum(
    G: Hypergraph,
    weights=None,
    lam=None,
    C: Sequence[Sequence[int]] = (),
    max_edges: Optional[int] = None,
) -> Polynomial:
    """Sum over hyperforests F that stay hyperforests once the blocks C are
    adjoined as extra hyperedges, of prod w_A lambda^(k(F) - sum(|C|-1))."""
    blocks = [tuple(sorted(set(c))) for c in C]
    covered = set()
    for b in blocks:
        if not b:
            raise OverlappingBlocks("empty block")
        if covered & set(b):
            raise OverlappingBlocks(f"block {list(b)} overlaps an earlier block")
        covered |= set(b)
    lam_p = var("lambda") if lam is None else as_poly(lam)
    w = edge_weights(G, weights)
    big = [b for b in blocks if len(b) >= 2]
    shift = sum(len(b) - 1 for b in blocks)
    # blocks are appended as extra edges; a block equal to an edge of F
    # then counts as a doubled hyperedge, which has positive excess
    aug_edges = list(G.edges) + big
    parts = []
    for rec in enumerate_spanning_hyperforests(G, max_edges):
        if _multiset_excess_ok(G.n, [aug_edges[k] for k in range(G.m) if rec.edge_mask >> k & 1] + big):
            parts.append(_forest_monomial(w, rec.edge_mask) * lam_p ** (rec.k - shift))
    return poly_sum(parts)


def _multiset_excess_ok(n: int, edges: Sequence[Sequence[int]]) -> bool:
    parent = list(range(n))
    for e in edges:
        r = _find(parent, e[0])
        for v in e[1:]:
            s = _find(parent, v)
            if s == r:
                return False
            parent[s] = r
    return True


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if not seen[i]:
            j = i
            length = 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def matching_of(partition: Sequence[Sequence[int]], I: Sequence[int], J: Sequence[int]) -> Optional[Tuple[List[int], List[bool]]]:
    """For a properly matched partition return ``(pi, free)`` where ``pi[r]``
    is the index in J paired with ``I[r]`` and ``free[c]`` marks blocks with
    no I-vertex; return None if the partition is not properly matched."""
    pos_i = {v: r for r, v in enumerate(I)}
    pos_j = {v: s for s, v in enumerate(J)}
    pi = [-1] * len(I)
    free = []
    for block in partition:
        ri = [pos_i[v] for v in block if v in pos_i]
        sj = [pos_j[v] for v in block if v in pos_j]
        if not ri and not sj:
            free.append(True)
            continue
        if len(ri) != 1 or len(sj) != 1:
            return None
        pi[ri[0]] = sj[0]
        free.append(False)
    return pi, free


def _check_ij(I: Sequence[int], J: Sequence[int]) -> None:
    if len(I) != len(J):
        raise LengthMismatch(f"|I| = {len(I)} but |J| = {len(J)}")
    if len(set(I)) != len(I) or len(set(J)) != len(J):
        raise DuplicateVertices("I and J must be duplicate-free")


def matched_forest_sum(
    G: Hypergraph,
    weights=None,
    t=None,
    lam=None,
    I: Sequence[int] = (),
    J: Sequence[int] = (),
    max_edges: Optional[int] = None,
) -> Polynomial:
    """Sum over properly matched hyperforests of sgn(pi) prod w_A and, for
    each component with no I-vertex, its rooted factor."""
    _check_ij(I, J)
    w = edge_weights(G, weights)
    tv = vertex_ts(G.n, t)
    lv = edge_lambdas(G, lam)
    parts = []
    for rec in enumerate_spanning_hyperforests(G, max_edges):
        m = matching_of(rec.partition, I, J)
        if m is None:
            continue
        pi, free = m
        p = _forest_monomial(w, rec.edge_mask).scale(_perm_sign(pi))
        for comp, is_free in zip(rec.components, free):
            if is_free:
                p = p * _rooted_factor(G, comp, tv, lv)
        parts.append(p)
    return poly_sum(parts)


def connected_forest_sum(
    G: Hypergraph, weights=None, lam=None, i: int = 0, j: int = 0, max_edges: Optional[int] = None
) -> Polynomial:
    """Sum over hyperforests with i and j in the same component of prod w_A lambda^k(F)."""
    lam_p = var("lambda") if lam is None else as_poly(lam)
    w = edge_weights(G, weights)
    parts = []
    for rec in enumerate_spanning_hyperforests(G, max_edges):
        if any(i in c.vertices and j in c.vertices for c in rec.components):
            parts.append(_forest_monomial(w, rec.edge_mask) * lam_p ** rec.k)
    return poly_sum(parts)


# -- construction sequences ---------------------------------------------


def construction_sequence(G: Hypergraph, edge_mask: Optional[int] = None) -> Optional[List[Tuple[int, int]]]:
    """Greedy ordering of the edges of a connected (sub)hypergraph in which
    every edge after the first meets the union of its predecessors.

    Returns ``[(edge index, intersection size), ...]`` (the first entry has
    size 0) or None when the edges do not form a connected hypergraph.
    """
    if edge_mask is None:
        edge_mask = (1 << G.m) - 1
    todo = [k for k in range(G.m) if edge_mask >> k & 1]
    if not todo:
        return []
    first = todo.pop(0)
    seq = [(first, 0)]
    covered = set(G.edges[first])
    while todo:
        for idx, k in enumerate(todo):
            meet = len(covered & set(G.edges[k]))
            if meet:
                seq.append((k, meet))
                covered |= set(G.edges[k])
                todo.pop(idx)
                break
        else:
            return None
    return seq


def is_connected(G: Hypergraph, edge_mask: Optional[int] = None) -> bool:
    if edge_mask is None:
        edge_mask = (1 << G.m) - 1
    return count_components(G, edge_mask) == 1
