"""Grassmann-side partition functions and correlators, and the harness that
compares them with the hypergraph-side enumerations.

The two sides share only the polynomial ring: left-hand sides come from
:mod:`grassmann` and :mod:`operators`, right-hand sides from
:mod:`hypergraph`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import hypergraph as hg
from .errors import CapExceeded, DuplicateVertices, LengthMismatch, UnknownIdentity
from .grassmann import GrassmannElement, gprod, integrate_product
from .hypergraph import Hypergraph
from .operators import f_lambda
from .ring import ZERO, Polynomial, as_poly, var, weight_name

LAMBDA = var("lambda")


@dataclass(frozen=True)
class ActionSpec:
    G: Hypergraph
    t: Tuple[Polynomial, ...]
    w: Tuple[Polynomial, ...]
    lam: Tuple[Polynomial, ...]
    lam_global: Polynomial = LAMBDA

    def __post_init__(self):
        if len(self.t) != self.G.n:
            raise ValueError("one t value per vertex required")
        if len(self.w) != self.G.m or len(self.lam) != self.G.m:
            raise ValueError("one weight and one lambda per hyperedge required")

    @classmethod
    def build(cls, G: Hypergraph, t=None, w=None, lam=None, lam_global: Polynomial = LAMBDA) -> "ActionSpec":
        """Missing maps default to t_i = lambda, the graph's weight symbols, and lambda_A = lambda."""
        lam_global = as_poly(lam_global)
        tv = hg._vertex_map(G.n, t, lambda i: lam_global)
        wv = hg.edge_weights(G, w)
        lv = hg._edge_map(G, lam, lambda k: lam_global)
        return cls(G, tuple(tv), tuple(wv), tuple(lv), lam_global)

    @classmethod
    def symbolic(cls, G: Hypergraph, per_edge_lambda: bool = True) -> "ActionSpec":
        """Independent symbols t_i, w_A and (optionally) lambda_A."""
        t = [var(f"t_{i}") for i in range(G.n)]
        lam = [var(weight_name("lambda", e)) if per_edge_lambda else LAMBDA for e in G.edges]
        return cls.build(G, t, None, lam)

    def with_t(self, t) -> "ActionSpec":
        return replace(self, t=tuple(hg._vertex_map(self.G.n, t, lambda i: self.lam_global)))

    def with_lam(self, lam) -> "ActionSpec":
        return replace(self, lam=tuple(hg._edge_map(self.G, lam, lambda k: self.lam_global)))

    def to_json(self) -> dict:
        return {
            "hypergraph": self.G.to_json(),
            "t": [p.to_json() for p in self.t],
            "w": [p.to_json() for p in self.w],
            "lam": [p.to_json() for p in self.lam],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ActionSpec":
        G = Hypergraph.from_json(obj["hypergraph"])
        return cls(
            G,
            tuple(Polynomial.from_json(p) for p in obj["t"]),
            tuple(Polynomial.from_json(p) for p in obj["w"]),
            tuple(Polynomial.from_json(p) for p in obj["lam"]),
        )


@dataclass(frozen=True)
class CorrelatorSpec:
    I: Tuple[int, ...] = ()
    J: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.I) != len(self.J):
            raise LengthMismatch(f"|I| = {len(self.I)} but |J| = {len(self.J)}")
        if len(set(self.I)) != len(self.I) or len(set(self.J)) != len(self.J):
            raise DuplicateVertices("I and J must be duplicate-free")
        object.__setattr__(self, "I", tuple(self.I))
        object.__setattr__(self, "J", tuple(self.J))

    @property
    def k(self) -> int:
        return len(self.I)


DEFAULT_MAX_N = 16


def _check_caps(spec: ActionSpec, max_n: Optional[int]) -> None:
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if spec.G.n > cap:
        raise CapExceeded("vertex", spec.G.n, cap)


def action_factors(spec: ActionSpec) -> List[Tuple[int, GrassmannElement]]:
    """exp(sum w_A f_A) in product form: one factor 1 + w_A f_A per hyperedge."""
    n = spec.G.n
    one = GrassmannElement.one(n)
    out = []
    for k, e in enumerate(spec.G.edges):
        out.append((spec.G.edge_mask(k), one + f_lambda(e, n, spec.lam[k]).scale(spec.w[k])))
    return out


def observable(c: CorrelatorSpec, n: int) -> GrassmannElement:
    """psibar_{i1} psi_{j1} ... psibar_{ik} psi_{jk}, multiplied in this order."""
    factors = []
    for i, j in zip(c.I, c.J):
        factors.append(GrassmannElement.psibar(i, n))
        factors.append(GrassmannElement.psi(j, n))
    return gprod(factors, n)


def integral(spec: ActionSpec, prefix: Optional[GrassmannElement] = None, max_n: Optional[int] = None) -> Polynomial:
    """Full Berezin integral of prefix * exp(action) against the t-measure."""
    _check_caps(spec, max_n)
    t = dict(enumerate(spec.t))
    return integrate_product(action_factors(spec), spec.G.n, t, prefix)


def z_partition(spec: ActionSpec, max_n: Optional[int] = None) -> Polynomial:
    return integral(spec, None, max_n)


def corr_unnormalized(spec: ActionSpec, c: CorrelatorSpec, max_n: Optional[int] = None) -> Polynomial:
    if not c.I:
        return z_partition(spec, max_n)
    return integral(spec, observable(c, spec.G.n), max_n)


def constrained_integral(spec: ActionSpec, C: Sequence[Sequence[int]], max_n: Optional[int] = None) -> Polynomial:
    """Integral with an extra factor prod_gamma f_{C_gamma} (at the global lambda)."""
    n = spec.G.n
    prefix = gprod((f_lambda(b, n, spec.lam_global) for b in C), n)
    return integral(spec, prefix, max_n)


# -- verification harness -----------------------------------------------


@dataclass(frozen=True)
class Instance:
    spec: ActionSpec
    I: Tuple[int, ...] = ()
    J: Tuple[int, ...] = ()
    C: Tuple[Tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        out = self.spec.to_json()
        out["I"] = list(self.I)
        out["J"] = list(self.J)
        out["C"] = [list(b) for b in self.C]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        return cls(
            ActionSpec.from_json(obj),
            tuple(obj.get("I", ())),
            tuple(obj.get("J", ())),
            tuple(tuple(b) for b in obj.get("C", ())),
        )


def _unrooted(spec: ActionSpec) -> ActionSpec:
    return spec.with_t(spec.lam_global).with_lam(spec.lam_global)


def _rooted(spec: ActionSpec) -> ActionSpec:
    return spec.with_lam(0)


def _partition(inst: Instance, max_n):
    s = inst.spec
    return z_partition(s, max_n), hg.forest_weight_sum(s.G, list(s.w), list(s.t), list(s.lam))


def _unrooted_forests(inst: Instance, max_n):
    s = _unrooted(inst.spec)
    return z_partition(s, max_n), hg.constrained_forest_sum(s.G, list(s.w), s.lam_global, ())


def _rooted_forests(inst: Instance, max_n):
    s = _rooted(inst.spec)
    return z_partition(s, max_n), hg.forest_weight_sum(s.G, list(s.w), list(s.t), 0)


def _constrained(inst: Instance, max_n):
    s = _unrooted(inst.spec)
    return constrained_integral(s, inst.C, max_n), hg.constrained_forest_sum(s.G, list(s.w), s.lam_global, inst.C)


def _correlator_with(transform: Callable[[ActionSpec], ActionSpec]):
    def run(inst: Instance, max_n):
        s = transform(inst.spec)
        c = CorrelatorSpec(inst.I, inst.J)
        lhs = corr_unnormalized(s, c, max_n)
        rhs = hg.matched_forest_sum(s.G, list(s.w), list(s.t), list(s.lam), c.I, c.J)
        return lhs, rhs

    return run


def _unrooted_correlator(inst: Instance, max_n):
    s = _unrooted(inst.spec)
    c = CorrelatorSpec(inst.I, inst.J)
    lhs = corr_unnormalized(s, c, max_n)
    lam = s.lam_global
    # sgn(pi) prod w_A lambda^(k(F) - k) over properly matched hyperforests
    parts = []
    w = list(s.w)
    for rec in hg.enumerate_spanning_hyperforests(s.G):
        m = hg.matching_of(rec.partition, c.I, c.J)
        if m is None:
            continue
        p = hg._forest_monomial(w, rec.edge_mask).scale(hg._perm_sign(m[0]))
        parts.append(p * lam ** (rec.k - c.k))
    return lhs, sum(parts, ZERO)


def _two_point(inst: Instance, max_n):
    s = _unrooted(inst.spec)
    if len(inst.I) != 1 or len(inst.J) != 1:
        raise LengthMismatch("the two-point identity needs |I| = |J| = 1")
    i, j = inst.I[0], inst.J[0]
    lhs = corr_unnormalized(s, CorrelatorSpec((i,), (j,)), max_n) * s.lam_global
    rhs = hg.connected_forest_sum(s.G, list(s.w), s.lam_global, i, j)
    return lhs, rhs


IDENTITIES: Dict[str, Callable[[Instance, Optional[int]], Tuple[Polynomial, Polynomial]]] = {
    "partition-function": _partition,
    "unrooted-forests": _unrooted_forests,
    "rooted-forests": _rooted_forests,
    "constrained-forests": _constrained,
    "correlator": _correlator_with(lambda s: s),
    "unrooted-correlator": _unrooted_correlator,
    "rooted-correlator": _correlator_with(_rooted),
    "two-point": _two_point,
}


def verify_identity(name: str, instance: Instance, max_n: Optional[int] = None) -> dict:
    """Compute both sides of a named identity; returns the report dictionary."""
    fn = IDENTITIES.get(name)
    if fn is None:
        raise UnknownIdentity(f"unknown identity {name!r}")
    start = time.perf_counter()
    lhs, rhs = fn(instance, max_n)
    millis = int((time.perf_counter() - start) * 1000)
    return {
        "identity": name,
        "instance": instance.to_json(),
        "equal": lhs == rhs,
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
        "millis": millis,
    }
