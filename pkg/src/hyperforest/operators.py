"""The tau_A and f_A elements, their product rules, and sigma-model scalar products.

Identities whose natural form divides by a polynomial in lambda are
checked after multiplying through by the denominator ("cleared form").
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

from .grassmann import GrassmannElement, d_psi, d_psibar, gmul, gprod, tau_key
from .hypergraph import Hypergraph, classify, components
from .matrixtree.determinants import det
from .ring import Polynomial, as_poly, var

Lam = Union[Polynomial, int, str]


def _lam(lam: Lam | None) -> Polynomial:
    if lam is None:
        return var("lambda")
    if isinstance(lam, str):
        return var(lam)
    return as_poly(lam)


@dataclass(frozen=True)
class FLambdaSpec:
    A: FrozenSet[int]
    lam: Polynomial

    @classmethod
    def of(cls, A: Iterable[int], lam: Lam | None = None) -> "FLambdaSpec":
        return cls(frozenset(A), _lam(lam))


def tau(A: Iterable[int], n: int) -> GrassmannElement:
    return GrassmannElement.monomial(tau_key(A), n)


def _pb_p(i: int, j: int, n: int) -> GrassmannElement:
    return gmul(GrassmannElement.psibar(i, n), GrassmannElement.psi(j, n))


@lru_cache(maxsize=4096)
def _laplacian_part(A: FrozenSet[int], n: int) -> GrassmannElement:
    """sum_i tau_{A-i} - sum_{i != j} psibar_i psi_j tau_{A-{i,j}}."""
    acc = GrassmannElement.zero(n)
    for i in A:
        acc = acc + tau(A - {i}, n)
    for i in A:
        for j in A:
            if i != j:
                acc = acc - gmul(_pb_p(i, j, n), tau(A - {i, j}, n))
    return acc


def f_cleared(A: Iterable[int], num: Lam, den: int, n: int) -> GrassmannElement:
    """``den * f_A`` at lambda = num/den, which is polynomial in ``num``."""
    A = frozenset(A)
    return tau(A, n).scale(_lam(num).scale(1 - len(A))) + _laplacian_part(A, n).scale(den)


def f_lambda(spec: FLambdaSpec | Iterable[int], n: int, lam: Lam | None = None) -> GrassmannElement:
    """f_A built term by term from its defining sum."""
    if not isinstance(spec, FLambdaSpec):
        spec = FLambdaSpec.of(spec, lam)
    return _f_explicit(spec.A, spec.lam, n)


@lru_cache(maxsize=8192)
def _f_explicit(A: FrozenSet[int], lam: Polynomial, n: int) -> GrassmannElement:
    return f_cleared(A, lam, 1, n)


def f_lambda_derivative(spec: FLambdaSpec | Iterable[int], n: int, lam: Lam | None = None) -> GrassmannElement:
    """f_A as (lambda (1-|A|) + d dbar) tau_A."""
    if not isinstance(spec, FLambdaSpec):
        spec = FLambdaSpec.of(spec, lam)
    t = tau(spec.A, n)
    return t.scale(spec.lam.scale(1 - len(spec.A))) + d_psi(d_psibar(t))


def scalar_product(i: int, j: int, n: int, lam: Lam | None = None) -> GrassmannElement:
    """n_i . n_j with sigma_i = 1 - lambda psibar_i psi_i."""
    one = GrassmannElement.one(n)
    if i == j:
        return one
    L = _lam(lam)
    db = GrassmannElement.psibar(i, n) - GrassmannElement.psibar(j, n)
    dp = GrassmannElement.psi(i, n) - GrassmannElement.psi(j, n)
    return one - gmul(db, dp).scale(L) + tau((i, j), n).scale(L * L)


def gram_matrix(A: Sequence[int], n: int, lam: Lam | None = None) -> List[List[GrassmannElement]]:
    A = sorted(A)
    return [[scalar_product(i, j, n, lam) for j in A] for i in A]


def gram_det_check(A: Iterable[int], n: int, lam: Lam | None = None) -> bool:
    """det(n_i . n_j) == k! lambda^(k-1) f_A."""
    A = sorted(set(A))
    k = len(A)
    L = _lam(lam)
    lhs = det(gram_matrix(A, n, lam))
    rhs = f_lambda(A, n, L).scale(L ** (k - 1) * factorial(k))
    return lhs == rhs


# -- product identities -------------------------------------------------


def product_rule_check(A: Iterable[int], B: Iterable[int], n: int, lam: Lam = "lambda", lam2: Lam = "lambda'") -> bool:
    """f_A^(lam) f_B^(lam2) against the union rule, for overlapping A and B.

    When |A & B| = 1 the product is f_{A|B} at the weighted average
    ((|A|-1) lam + (|B|-1) lam2) / (|A|B|-1), compared after multiplying by
    the denominator; when |A & B| >= 2 the product vanishes.
    """
    A, B = frozenset(A), frozenset(B)
    if not A & B:
        raise ValueError("A and B must intersect")
    L1, L2 = _lam(lam), _lam(lam2)
    lhs = gmul(f_lambda(A, n, L1), f_lambda(B, n, L2))
    if len(A & B) >= 2:
        return lhs.is_zero()
    U = A | B
    den = len(U) - 1
    if den == 0:
        return lhs == f_lambda(U, n, L1)
    num = L1.scale(len(A) - 1) + L2.scale(len(B) - 1)
    return lhs.scale(den) == f_cleared(U, num, den, n)


def tau_absorption_check(A: Iterable[int], B: Iterable[int], n: int, lam: Lam | None = None) -> bool:
    """f_A tau_B = tau_{A|B} if |A & B| = 1, and 0 if |A & B| >= 2."""
    A, B = frozenset(A), frozenset(B)
    lhs = gmul(f_lambda(A, n, lam), tau(B, n))
    meet = len(A & B)
    if meet == 1:
        return lhs == tau(A | B, n)
    if meet >= 2:
        return lhs.is_zero()
    raise ValueError("A and B must intersect")


def nilpotency_check(A: Iterable[int], n: int, lam: Lam | None = None) -> bool:
    f = f_lambda(A, n, lam)
    return gmul(f, f).is_zero()


def hypertree_product_check(G: Hypergraph, lams: Sequence[Lam] | None = None) -> bool:
    """For connected G: prod f_A^(lam_A) = f_V^(lam*) if G is a hypertree, else 0.

    lam* = sum (|A|-1) lam_A / (|V|-1); compared in cleared form.  V is the
    union of the edges.
    """
    n = G.n
    if lams is None:
        lams = [var(f"lambda_{{{','.join(map(str, e))}}}") for e in G.edges]
    Ls = [_lam(x) for x in lams]
    prod = gprod((f_lambda(e, n, L) for e, L in zip(G.edges, Ls)), n)
    full = (1 << G.m) - 1
    rec = classify(G, full)
    V = sorted(set().union(*map(set, G.edges))) if G.edges else []
    touched = [c for c in rec.components if c.edges]
    if len(touched) != 1:
        raise ValueError("edges must form a connected hypergraph")
    if touched[0].excess != 0:
        return prod.is_zero()
    num = sum((L.scale(len(e) - 1) for e, L in zip(G.edges, Ls)), Polynomial.const(0))
    den = len(V) - 1
    return prod.scale(den) == f_cleared(V, num, den, n)


def forest_product_check(G: Hypergraph, lam: Lam | None = None) -> bool:
    """For a hyperforest: prod_A f_A = prod over components of f_C."""
    n = G.n
    L = _lam(lam)
    full = (1 << G.m) - 1
    if classify(G, full).kind != "hyperforest":
        raise ValueError("not a hyperforest")
    lhs = gprod((f_lambda(e, n, L) for e in G.edges), n)
    rhs = gprod((f_lambda(c, n, L) for c in components(G, full)), n)
    return lhs == rhs


def large_lambda_check(A: Iterable[int], n: int) -> bool:
    """lambda-linear part of f_A is (1-|A|) tau_A, and f^(l) - f^(l') = (l - l')(1-|A|) tau_A."""
    A = frozenset(A)
    L, L2 = var("lambda"), var("lambda'")
    f = f_lambda(A, n, L)
    lin = f.map_coefficients(lambda c: c.coefficient("lambda", 1))
    ok = lin == tau(A, n).scale(1 - len(A))
    diff = f - f_lambda(A, n, L2)
    return ok and diff == tau(A, n).scale((L - L2).scale(1 - len(A)))


def four_point_relation(a: int, b: int, c: int, d: int, n: int, lam: Lam | None = None) -> GrassmannElement:
    """lam f_abcd - sum of f over the triples + sum over the 3 pairings of f f."""
    L = _lam(lam)
    f = lambda S: f_lambda(S, n, L)
    quad = (a, b, c, d)
    r = f(quad).scale(L)
    for tri in combinations(quad, 3):
        r = r - f(tri)
    for (p, q), (s, u) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
        r = r + gmul(f((p, q)), f((s, u)))
    return r


def tree_chain_check(A: Sequence[int], tree_edges: Sequence[Tuple[int, int]], n: int, lam: Lam | None = None) -> bool:
    """lambda^(k-1) f_A == prod over the tree edges of (1 - n_i . n_j)."""
    L = _lam(lam)
    k = len(set(A))
    one = GrassmannElement.one(n)
    rhs = gprod((one - scalar_product(i, j, n, L) for i, j in tree_edges), n)
    return f_lambda(A, n, L).scale(L ** (k - 1)) == rhs
