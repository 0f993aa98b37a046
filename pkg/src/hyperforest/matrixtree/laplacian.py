"""Graph Laplacians, principal-minor tree counts and the k-uniform Laplacian tensor."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, Iterable, List, Tuple

from ..errors import NotAGraph, NotUniform
from ..grassmann import GrassmannElement, gmul, gprod
from ..hypergraph import Hypergraph, edge_weights
from ..operators import f_lambda
from ..ring import ZERO, Polynomial, as_poly, poly_sum, var
from .determinants import det


def laplacian_graph(G: Hypergraph, w=None) -> List[List[Polynomial]]:
    if not G.is_graph():
        raise NotAGraph("Laplacian matrix needs a graph (all edges of size 2)")
    wv = edge_weights(G, w)
    L = [[ZERO] * G.n for _ in range(G.n)]
    for (i, j), x in zip(G.edges, wv):
        L[i][j] = L[i][j] - x
        L[j][i] = L[j][i] - x
        L[i][i] = L[i][i] + x
        L[j][j] = L[j][j] + x
    return L


def principal_minor_trees(G: Hypergraph, roots: Iterable[int], w=None) -> Polynomial:
    """det of the Laplacian with the root rows and columns deleted: the
    rooted spanning forests with one root of ``roots`` per tree."""
    L = laplacian_graph(G, w)
    roots = set(roots)
    keep = [i for i in range(G.n) if i not in roots]
    return det([[L[i][j] for j in keep] for i in keep])


def _k_uniform(G: Hypergraph) -> int:
    k = G.uniformity()
    if k is None:
        raise NotUniform("hypergraph is not uniform")
    return k


def laplacian_tensor(G: Hypergraph, w=None) -> Dict[Tuple[int, ...], Polynomial]:
    """Nonzero entries of the rank-k Laplacian tensor, keyed by index tuples."""
    k = _k_uniform(G)
    wv = edge_weights(G, w)
    weight = {frozenset(e): x for e, x in zip(G.edges, wv)}
    L: Dict[Tuple[int, ...], Polynomial] = {}
    for e, x in zip(G.edges, wv):
        for idx in permutations(e):
            L[idx] = -x
    # exactly one repeated pair: the k-1 distinct values S, one of them doubled
    seen = set()
    for e in G.edges:
        for S in combinations(e, k - 1):
            if S in seen:
                continue
            seen.add(S)
            total = poly_sum(weight.get(frozenset(S) | {x}, ZERO) for x in range(G.n) if x not in S)
            if not total:
                continue
            val = total.scale(Fraction(1, k - 1))
            for d in S:
                for idx in set(permutations(S + (d,))):
                    L[idx] = val
    return L


def tensor_partial_sums_vanish(G: Hypergraph, w=None) -> bool:
    """sum over the last index of L is 0 whenever the first k-1 indices are distinct."""
    k = _k_uniform(G)
    L = laplacian_tensor(G, w)
    heads = {idx[:-1] for idx in L if len(set(idx[:-1])) == k - 1}
    for h in heads:
        if poly_sum(L.get(h + (x,), ZERO) for x in range(G.n)):
            return False
    return True


def tensor_action(G: Hypergraph, w=None, lam=None) -> GrassmannElement:
    """sum over index tuples of L/(k-2)! [psibar_i1 psi_i2 tau_{i3..ik} + (lam/k) tau_{i1..ik}]."""
    k = _k_uniform(G)
    n = G.n
    lam = var("lambda") if lam is None else as_poly(lam)
    L = laplacian_tensor(G, w)
    norm = Fraction(1, factorial(k - 2))
    acc = GrassmannElement.zero(n)
    for idx, val in sorted(L.items()):
        gens = [GrassmannElement.psibar(idx[0], n), GrassmannElement.psi(idx[1], n)]
        for i in idx[2:]:
            gens += [GrassmannElement.psibar(i, n), GrassmannElement.psi(i, n)]
        term = gprod(gens, n)
        full = gprod(
            (gmul(GrassmannElement.psibar(i, n), GrassmannElement.psi(i, n)) for i in idx), n
        ).scale(lam.scale(Fraction(1, k)))
        acc = acc + (term + full).scale(val.scale(norm))
    return acc


def laplacian_tensor_action(G: Hypergraph, w=None, lam=None) -> Tuple[GrassmannElement, bool]:
    """The tensor form of the action and whether it equals sum w_A f_A."""
    lam_p = var("lambda") if lam is None else as_poly(lam)
    wv = edge_weights(G, w)
    action = tensor_action(G, w, lam_p)
    direct = GrassmannElement.zero(G.n)
    for e, x in zip(G.edges, wv):
        direct = direct + f_lambda(e, G.n, lam_p).scale(x)
    return action, action == direct
