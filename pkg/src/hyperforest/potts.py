"""Potts model on hypergraphs: spin sums, the FK subset expansion and its limits."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Optional, Sequence, Union

from . import hypergraph as hg
from .errors import CapExceeded, NotDivisible
from .hypergraph import Hypergraph
from .ring import ONE, Polynomial, as_poly, poly_sum, var, weight_name

SPIN_CAP = 10 ** 7
SPIN_VERTEX_CAP = 8

Q = var("q")


@dataclass(frozen=True)
class PottsSpec:
    G: Hypergraph
    q_value: Union[int, Polynomial]
    v: tuple

    @classmethod
    def build(cls, G: Hypergraph, q_value: Union[int, Polynomial] = Q, v=None) -> "PottsSpec":
        """``v`` defaults to symbols v_{A}."""
        vs = hg._edge_map(G, v, lambda k: var(weight_name("v", G.edges[k])))
        return cls(G, q_value, tuple(vs))


def potts_bruteforce(spec: PottsSpec) -> Polynomial:
    """sum over all q^n colorings of prod_A (1 + v_A [A monochromatic])."""
    q = spec.q_value
    if not isinstance(q, int) or q < 1:
        raise ValueError("brute force needs a positive integer q")
    n = spec.G.n
    if n > SPIN_VERTEX_CAP:
        raise CapExceeded("vertex", n, SPIN_VERTEX_CAP)
    if q ** n > SPIN_CAP:
        raise CapExceeded("coloring", q ** n, SPIN_CAP)
    # group colorings by their set of monochromatic edges
    counts: Dict[int, int] = {}
    for sigma in product(range(q), repeat=n):
        mono = 0
        for k, e in enumerate(spec.G.edges):
            c = sigma[e[0]]
            if all(sigma[v] == c for v in e[1:]):
                mono |= 1 << k
        counts[mono] = counts.get(mono, 0) + 1
    parts = []
    for mono, cnt in counts.items():
        p = Polynomial.const(cnt)
        for k in range(spec.G.m):
            if mono >> k & 1:
                p = p * (ONE + spec.v[k])
        parts.append(p)
    return poly_sum(parts)


def fk_polynomial(spec: PottsSpec, max_edges: Optional[int] = None) -> Polynomial:
    """sum over E' of q^k(E') prod v_A, with q taken from ``spec.q_value`` (symbol or integer)."""
    q = as_poly(spec.q_value)
    parts = []
    for mask in hg.iter_subsets(spec.G, max_edges):
        p = q ** hg.count_components(spec.G, mask)
        for k in range(spec.G.m):
            if mask >> k & 1:
                p = p * spec.v[k]
        parts.append(p)
    return poly_sum(parts)


@dataclass(frozen=True)
class QLimits:
    C_G: Polynomial
    F_G: Polynomial
    T_G: Polynomial
    checks: Dict[str, bool]

    def ok(self) -> bool:
        return all(self.checks.values())


def _subset_sum(G: Hypergraph, w: Sequence[Polynomial], keep, max_edges) -> Polynomial:
    parts = []
    for mask in hg.iter_subsets(G, max_edges):
        if keep(mask):
            p = ONE
            for k in range(G.m):
                if mask >> k & 1:
                    p = p * w[k]
            parts.append(p)
    return poly_sum(parts)


def q_limits(G: Hypergraph, w=None, max_edges: Optional[int] = None) -> QLimits:
    """C_G, F_G and T_G in the weights w_A, plus the limit identities linking them.

    Every limit is an exact coefficient extraction:
      - ``connected_q0``: Z(q, w) has lowest q-power k(G), with coefficient C_G.
      - ``forests_q0``: q^-|V| Z(q, q^(|A|-1) w_A) is a polynomial whose q^0 part is F_G.
      - ``trees_from_connected``: C_G(lambda^(|A|-1) w_A) is divisible by
        lambda^(|V|-1) and its lambda^0 part after division is T_G.
      - ``trees_from_forests``: F_G(lambda^(|A|-1) w_A) has lambda-degree at most
        |V|-1 and its top coefficient is T_G.
    The two tree extractions are only meaningful for connected G; for
    disconnected G they reduce to T_G = 0.
    """
    wv = hg.edge_weights(G, w)
    full = (1 << G.m) - 1
    kG = hg.count_components(G, full)
    C_G = _subset_sum(G, wv, lambda m: hg.count_components(G, m) == kG, max_edges)
    F_G = _subset_sum(G, wv, lambda m: hg.is_hyperforest(G, m), max_edges)
    T_G = _subset_sum(G, wv, lambda m: hg.count_components(G, m) == 1 and hg.is_hyperforest(G, m), max_edges)

    checks: Dict[str, bool] = {}
    Zw = fk_polynomial(PottsSpec(G, Q, tuple(wv)), max_edges)
    checks["connected_q0"] = Zw.min_degree("q") == kG and Zw.coefficient("q", kG) == C_G

    qw = tuple(Q ** (len(e) - 1) * x for e, x in zip(G.edges, wv))
    Zq = fk_polynomial(PottsSpec(G, Q, qw), max_edges)
    try:
        checks["forests_q0"] = Zq.divexact({"q": G.n}).evaluate({"q": 0}) == F_G
    except NotDivisible:
        checks["forests_q0"] = False

    lam = var("lambda")
    lw = [lam ** (len(e) - 1) * x for e, x in zip(G.edges, wv)]
    if kG == 1:
        C_lam = _subset_sum(G, lw, lambda m: hg.count_components(G, m) == 1, max_edges)
        try:
            checks["trees_from_connected"] = C_lam.divexact({"lambda": G.n - 1}).evaluate({"lambda": 0}) == T_G
        except NotDivisible:
            checks["trees_from_connected"] = False
        F_lam = _subset_sum(G, lw, lambda m: hg.is_hyperforest(G, m), max_edges)
        checks["trees_from_forests"] = (
            F_lam.degree("lambda") <= G.n - 1 and F_lam.coefficient("lambda", G.n - 1) == T_G
        )
    else:
        checks["trees_from_connected"] = checks["trees_from_forests"] = T_G.is_zero()
    return QLimits(C_G, F_G, T_G, checks)
