"""Seeded random instances and the registry of verification suites.

Each trial draws from ``random.Random(f"{seed}:{trial}")``, so a trial is
reproducible from (suite, seed, trial) alone and independent of the others.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence

from . import hypergraph as hg
from . import integrals, operators, osp, potts
from .errors import UnknownIdentity
from .hypergraph import Hypergraph
from .matrixtree import determinants as dets
from .matrixtree import general_action as ga
from .matrixtree import laplacian as lap
from .ring import ZERO, Polynomial, var

THREADS_ENV = "HYPERFOREST_THREADS"


@dataclass(frozen=True)
class Params:
    n: Optional[int] = None  # fixed vertex count
    max_n: Optional[int] = None
    max_edges: Optional[int] = None


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


# -- generators ---------------------------------------------------------


def random_hypergraph(
    rng: random.Random,
    n_range=(2, 6),
    m_max: int = 8,
    sizes: Sequence[int] = (2, 3, 4),
    require: Optional[int] = None,
) -> Hypergraph:
    """Distinct random hyperedges; with ``require`` at least one edge has that size."""
    n = rng.randint(*n_range)
    sizes = [s for s in sizes if s <= n] or [2]
    pool = [c for s in sizes for c in combinations(range(n), s)]
    m = rng.randint(0, min(m_max, len(pool)))
    edges = rng.sample(pool, m)
    if require is not None and require <= n and not any(len(e) == require for e in edges):
        extra = [c for c in combinations(range(n), require) if c not in edges]
        if len(edges) == m_max and edges:
            edges.pop()
        edges.append(rng.choice(extra))
    return Hypergraph(n, tuple(sorted(edges)))


def random_connected(rng: random.Random, n_range=(2, 5), m_max: int = 4, sizes=(2, 3)) -> Hypergraph:
    while True:
        G = random_hypergraph(rng, n_range, m_max, sizes)
        if G.m and hg.is_connected(G):
            return G


def random_subset(rng: random.Random, n: int, lo: int = 1) -> frozenset:
    return frozenset(rng.sample(range(n), rng.randint(lo, n)))


def random_blocks(rng: random.Random, n: int) -> tuple:
    """A few disjoint blocks of size >= 2."""
    verts = list(range(n))
    rng.shuffle(verts)
    blocks = []
    while len(verts) >= 2 and rng.random() < 0.6:
        size = rng.randint(2, min(3, len(verts)))
        blocks.append(tuple(sorted(verts[:size])))
        verts = verts[size:]
    return tuple(blocks)


def random_matrix(rng: random.Random, k: int, name: str, density: float = 0.6) -> List[List[Polynomial]]:
    """Entries are independent symbols, integers or zero."""
    M = []
    for i in range(k):
        row = []
        for j in range(k):
            r = rng.random()
            if r < density:
                row.append(var(f"{name}_{{{i},{j}}}"))
            elif r < density + 0.2:
                row.append(Polynomial.const(rng.randint(-3, 3)))
            else:
                row.append(ZERO)
        M.append(row)
    return M


def _bounds(p: Params, lo: int, hi: int):
    if p.n is not None:
        return (p.n, p.n)
    return (lo, hi if p.max_n is None else max(lo, min(hi, p.max_n)))


def _edges(p: Params, default: int) -> int:
    return default if p.max_edges is None else p.max_edges


# -- suites -------------------------------------------------------------


def _report(instance: dict, equal: bool, lhs=None, rhs=None, checks=None) -> dict:
    out = {"instance": instance, "equal": bool(equal)}
    if lhs is not None:
        out["lhs"] = lhs.to_json()
        out["rhs"] = rhs.to_json()
    if checks is not None:
        out["checks"] = checks
    return out


def _identity_suite(name: str, kind: str):
    def run(rng: random.Random, p: Params) -> dict:
        G = random_hypergraph(rng, _bounds(p, 2, 6), _edges(p, 8))
        spec = integrals.ActionSpec.symbolic(G)
        n = G.n
        I = J = ()
        C = ()
        if kind == "correlator":
            k = rng.randint(0, min(2, n))
            I, J = tuple(rng.sample(range(n), k)), tuple(rng.sample(range(n), k))
        elif kind == "two-point":
            I, J = (rng.randrange(n),), (rng.randrange(n),)
        elif kind == "constrained":
            C = random_blocks(rng, n)
        inst = integrals.Instance(spec, I, J, C)
        rep = integrals.verify_identity(name, inst, p.max_n)
        checks = None
        equal = rep["equal"]
        if kind == "correlator" and len(I) == 2 and name != "unrooted-correlator":
            s = spec if name == "correlator" else spec.with_lam(0)
            a = integrals.corr_unnormalized(s, integrals.CorrelatorSpec(I, J))
            b = integrals.corr_unnormalized(s, integrals.CorrelatorSpec(I[::-1], J))
            checks = {"antisymmetric": a == -b}
            equal = equal and checks["antisymmetric"]
        out = {"instance": rep["instance"], "equal": equal, "lhs": rep["lhs"], "rhs": rep["rhs"]}
        if checks is not None:
            out["checks"] = checks
        return out

    return run


def _product_rule(rng, p):
    n = _bounds(p, 5, 5)[1]
    while True:
        A, B = random_subset(rng, n), random_subset(rng, n)
        if A & B:
            break
    ok = operators.product_rule_check(A, B, n)
    return _report({"n": n, "A": sorted(A), "B": sorted(B)}, ok)


def _hyperforest_products(rng, p):
    G = random_connected(rng, _bounds(p, 2, 5), _edges(p, 4))
    checks = {"hypertree-product": operators.hypertree_product_check(G)}
    n = G.n
    A = random_subset(rng, n)
    checks["nilpotent"] = operators.nilpotency_check(A, n)
    checks["lambda-linear"] = operators.large_lambda_check(A, n)
    B = random_subset(rng, n)
    if A & B:
        checks["tau-absorption"] = operators.tau_absorption_check(A, B, n)
    F = G.sub(max((m for m in hg.iter_subsets(G) if hg.is_hyperforest(G, m)), key=lambda m: (bin(m).count("1"), m)))
    checks["forest-product"] = operators.forest_product_check(F)
    return _report({"hypergraph": G.to_json(), "A": sorted(A), "B": sorted(B)}, all(checks.values()), checks=checks)


def _four_point(rng, p):
    n = _bounds(p, 4, 6)[1]
    a, b, c, d = rng.sample(range(n), 4)
    r = operators.four_point_relation(a, b, c, d, n)
    return _report({"n": n, "abcd": [a, b, c, d]}, r.is_zero())


def _potts_fk(rng, p):
    G = random_hypergraph(rng, _bounds(p, 1, 5), _edges(p, 6), (2, 3))
    checks = {}
    spec = potts.PottsSpec.build(G)
    Z = potts.fk_polynomial(spec, p.max_edges)
    for q in (1, 2, 3):
        brute = potts.potts_bruteforce(potts.PottsSpec(G, q, spec.v))
        checks[f"fk q={q}"] = brute == Z.substitute({"q": q})
    limits = potts.q_limits(G, None, p.max_edges)
    checks.update(limits.checks)
    return _report({"hypergraph": G.to_json()}, all(checks.values()), checks=checks)


def _determinant_sum(rng, p):
    k = rng.randint(1, 4)
    A, B = random_matrix(rng, k, "a"), random_matrix(rng, k, "b")
    lhs = dets.det(dets.mat_add(A, B))
    rhs = dets.det_sum_expansion(A, B)
    return _report({"k": k, "A": _mjson(A), "B": _mjson(B)}, lhs == rhs, lhs, rhs)


def _graphical(rng, p):
    k = rng.randint(1, 4)
    C = random_matrix(rng, k, "c")
    a = [var(f"a_{i}") for i in range(k)]
    b = [var(f"b_{i}") for i in range(k)]
    checks = dets.graphical_det_checks(C, a, b)
    # strictly upper triangular: every closed walk product vanishes
    U = [[var(f"u_{{{i},{j}}}") if j > i else ZERO for j in range(k)] for i in range(k)]
    checks.update({f"{key} (acyclic)": v for key, v in dets.graphical_det_checks(U, None, None, cycle_free=True).items()})
    return _report({"k": k, "C": _mjson(C)}, all(checks.values()), checks=checks)


def _gram(rng, p):
    n = _bounds(p, 5, 5)[1]
    A = random_subset(rng, n)
    return _report({"n": n, "A": sorted(A)}, operators.gram_det_check(A, n))


def _general_action(rng, p):
    G = random_hypergraph(rng, _bounds(p, 3, 5), _edges(p, 4), (2, 3), require=3)
    act = ga.GeneralAction.symbolic(G)
    k = rng.randint(0, min(2, G.n))
    I, J = tuple(rng.sample(range(G.n), k)), tuple(rng.sample(range(G.n), k))
    lhs = ga.general_action_integral(act, I, J)
    rhs = ga.oriented_config_sum(act, I, J)
    return _report({"hypergraph": G.to_json(), "I": list(I), "J": list(J)}, lhs == rhs, lhs, rhs)


def _moon(rng, p):
    G = random_hypergraph(rng, _bounds(p, 2, 5), _edges(p, 6), (2,))
    return _report({"hypergraph": G.to_json()}, ga.moon_check(ga.GeneralAction.symbolic(G)))


def _osp_relations(rng, p):
    n = _bounds(p, 1, 3)
    n = rng.randint(*n)
    checks = osp.check_osp_relations(n)
    return _report({"n": n}, all(checks.values()), checks=checks)


def _osp_invariance(rng, p):
    n = rng.randint(*_bounds(p, 1, 4))
    sub_seed = rng.randrange(1 << 32)
    rep = osp.check_invariance(n, samples=5, seed=sub_seed)
    witness = rep.pop("non-invariance witness")
    rep["partition products"] = osp.partition_products_annihilated(n, seed=sub_seed, trials=3)
    rep["witness found"] = witness is not None
    return _report({"n": n, "seed": sub_seed}, all(rep.values()), checks=rep)


def _matrix_tree(rng, p):
    G = random_hypergraph(rng, _bounds(p, 2, 6), _edges(p, 8), (2,))
    lhs = lap.principal_minor_trees(G, (0,))
    rhs = potts.q_limits(G).T_G
    return _report({"hypergraph": G.to_json()}, lhs == rhs, lhs, rhs)


def _tensor_action(rng, p):
    n = rng.randint(*_bounds(p, 3, 5))
    pool = list(combinations(range(n), 3))
    edges = rng.sample(pool, rng.randint(1, min(2, len(pool))))
    G = Hypergraph(n, tuple(sorted(edges)))
    _, ok = lap.laplacian_tensor_action(G)
    checks = {"action": ok, "partial sums vanish": lap.tensor_partial_sums_vanish(G)}
    return _report({"hypergraph": G.to_json()}, all(checks.values()), checks=checks)


def _mjson(M):
    return [[x.to_json() for x in row] for row in M]


SUITES: Dict[str, Callable[[random.Random, Params], dict]] = {
    "partition-function": _identity_suite("partition-function", "plain"),
    "unrooted-forests": _identity_suite("unrooted-forests", "plain"),
    "rooted-forests": _identity_suite("rooted-forests", "plain"),
    "constrained-forests": _identity_suite("constrained-forests", "constrained"),
    "correlator": _identity_suite("correlator", "correlator"),
    "unrooted-correlator": _identity_suite("unrooted-correlator", "correlator"),
    "rooted-correlator": _identity_suite("rooted-correlator", "correlator"),
    "two-point": _identity_suite("two-point", "two-point"),
    "product-rule": _product_rule,
    "hyperforest-products": _hyperforest_products,
    "four-point-relation": _four_point,
    "potts-fk": _potts_fk,
    "determinant-sum": _determinant_sum,
    "graphical-determinants": _graphical,
    "gram-determinant": _gram,
    "general-action": _general_action,
    "moon": _moon,
    "osp-relations": _osp_relations,
    "osp-invariance": _osp_invariance,
    "matrix-tree": _matrix_tree,
    "tensor-action": _tensor_action,
}


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def run_trial(name: str, seed: int, trial: int, params: Params = Params()) -> dict:
    out = {"trial": trial}
    out.update(SUITES[name](trial_rng(seed, trial), params))
    return out


def run_suite(name: str, trials: int, seed: int, params: Params = Params(), threads: Optional[int] = None) -> List[dict]:
    """Trial reports ordered by trial index."""
    if name not in SUITES:
        raise UnknownIdentity(f"unknown identity {name!r}; known: {', '.join(SUITES)}")
    threads = worker_count() if threads is None else threads
    if threads <= 1 or trials <= 1:
        return [run_trial(name, seed, i, params) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda i: run_trial(name, seed, i, params), range(trials)))
