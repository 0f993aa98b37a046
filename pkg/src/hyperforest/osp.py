"""osp(1|2) generators acting on the Grassmann algebra, in lambda-polynomial form.

The supersymmetry generators carry a factor lambda^(-1/2); we work with
Qt_pm = lambda^(1/2) Q_pm = sum_i (1 - lambda psibar_i psi_i) d_i (resp. dbar_i),
so every relation below is a polynomial identity.  In this normalization

    {Qt_pm, Qt_pm} = pm 2 lambda X_pm,   {Qt_+, Qt_-} = lambda X_0,
    [X_0, Qt_pm] = pm Qt_pm,  [X_pm, Qt_mp] = -Qt_pm,  [X_pm, Qt_pm] = 0,
    [X_0, X_pm] = pm 2 X_pm,  [X_+, X_-] = X_0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional

from .grassmann import (
    PSI,
    PSIBAR,
    GrassmannElement,
    gderiv,
    gmul,
    gprod,
    integrate_all,
    key_parity,
)
from .operators import f_lambda, scalar_product, tau
from .ring import Polynomial, as_poly, var

X0 = "X0"
XPLUS = "Xplus"
XMINUS = "Xminus"
QPLUS = "Qtilde_plus"
QMINUS = "Qtilde_minus"
KINDS = (X0, XPLUS, XMINUS, QPLUS, QMINUS)
ODD_KINDS = (QPLUS, QMINUS)


@dataclass(frozen=True)
class OspOperator:
    kind: str
    n: int
    lam: Polynomial = var("lambda")
    site: Optional[int] = None  # restrict the sum over vertices to one site

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator {self.kind!r}")

    @property
    def odd(self) -> bool:
        return self.kind in ODD_KINDS

    def __call__(self, a: GrassmannElement) -> GrassmannElement:
        return apply(self, a)


def _gen(n: int, which: str, i: int) -> GrassmannElement:
    return GrassmannElement.psi(i, n) if which == PSI else GrassmannElement.psibar(i, n)


def apply(op: OspOperator, a: GrassmannElement) -> GrassmannElement:
    n = a.n
    sites = range(n) if op.site is None else (op.site,)
    acc = GrassmannElement.zero(n)
    for i in sites:
        if op.kind == X0:
            acc = acc + gmul(_gen(n, PSIBAR, i), gderiv(a, PSIBAR, i)) - gmul(_gen(n, PSI, i), gderiv(a, PSI, i))
        elif op.kind == XPLUS:
            acc = acc + gmul(_gen(n, PSIBAR, i), gderiv(a, PSI, i))
        elif op.kind == XMINUS:
            acc = acc + gmul(_gen(n, PSI, i), gderiv(a, PSIBAR, i))
        else:
            sigma = GrassmannElement.one(n) - tau((i,), n).scale(op.lam)
            which = PSI if op.kind == QPLUS else PSIBAR
            acc = acc + gmul(sigma, gderiv(a, which, i))
    return acc


def bracket(A: OspOperator, B: OspOperator, a: GrassmannElement) -> GrassmannElement:
    """Anticommutator when both are odd, commutator otherwise."""
    ab = apply(A, apply(B, a))
    ba = apply(B, apply(A, a))
    return ab + ba if A.odd and B.odd else ab - ba


def basis(n: int) -> Iterable[GrassmannElement]:
    for k in range(1 << (2 * n)):
        yield GrassmannElement.monomial(k, n)


def relation_table(n: int, lam: Polynomial):
    """(name, lhs pair, rhs as a function of the element) for every relation."""
    op = lambda k: OspOperator(k, n, lam)
    x0, xp, xm, qp, qm = (op(k) for k in KINDS)
    return [
        ("[X0,X+] = 2X+", (x0, xp), lambda a: apply(xp, a).scale(2)),
        ("[X0,X-] = -2X-", (x0, xm), lambda a: apply(xm, a).scale(-2)),
        ("[X+,X-] = X0", (xp, xm), lambda a: apply(x0, a)),
        ("{Q+,Q+} = 2 lambda X+", (qp, qp), lambda a: apply(xp, a).scale(lam.scale(2))),
        ("{Q-,Q-} = -2 lambda X-", (qm, qm), lambda a: apply(xm, a).scale(lam.scale(-2))),
        ("{Q+,Q-} = lambda X0", (qp, qm), lambda a: apply(x0, a).scale(lam)),
        ("[X0,Q+] = Q+", (x0, qp), lambda a: apply(qp, a)),
        ("[X0,Q-] = -Q-", (x0, qm), lambda a: -apply(qm, a)),
        ("[X+,Q-] = -Q+", (xp, qm), lambda a: -apply(qp, a)),
        ("[X-,Q+] = -Q-", (xm, qp), lambda a: -apply(qm, a)),
        ("[X+,Q+] = 0", (xp, qp), lambda a: GrassmannElement.zero(n)),
        ("[X-,Q-] = 0", (xm, qm), lambda a: GrassmannElement.zero(n)),
    ]


def check_osp_relations(n: int, lam=None) -> Dict[str, bool]:
    """Every relation, as an operator identity on the full monomial basis."""
    lam = var("lambda") if lam is None else as_poly(lam)
    report = {}
    for name, (A, B), rhs in relation_table(n, lam):
        report[name] = all(bracket(A, B, a) == rhs(a) for a in basis(n))
    return report


def random_element(n: int, rng: random.Random, terms: int = 6, parity: Optional[int] = None) -> GrassmannElement:
    """Sparse element with small integer and lambda-linear coefficients."""
    lam = var("lambda")
    d = {}
    for _ in range(terms):
        k = rng.randrange(1 << (2 * n))
        if parity is not None and key_parity(k) != parity:
            k ^= 1
        d[k] = Polynomial.const(rng.randint(-3, 3)) + lam.scale(rng.randint(-2, 2))
    return GrassmannElement(n, d)


def measure_integral(a: GrassmannElement, t) -> Polynomial:
    return integrate_all(a, t)


def check_invariance(n: int, samples: int = 20, seed: int = 0, lam=None) -> Dict[str, object]:
    """Invariance checks; the values are booleans except the witness entry."""
    lam = var("lambda") if lam is None else as_poly(lam)
    rng = random.Random(seed)
    ops = {k: OspOperator(k, n, lam) for k in KINDS}
    subsets = [frozenset(c) for r in range(n + 1) for c in combinations(range(n), r)]
    report: Dict[str, object] = {}
    fs = {A: f_lambda(A, n, lam) for A in subsets}
    report["Q annihilates f_A"] = all(
        not apply(ops[QPLUS], f) and not apply(ops[QMINUS], f) for f in fs.values()
    )
    report["X annihilates f_A"] = all(
        not apply(ops[k], f) for f in fs.values() for k in (X0, XPLUS, XMINUS)
    )
    report["f_A = lambda tau_A + Q+Q- tau_A"] = all(
        fs[A] == tau(A, n).scale(lam) + apply(ops[QPLUS], apply(ops[QMINUS], tau(A, n))) for A in subsets
    )
    report["Q annihilates n_i.n_j"] = all(
        not apply(ops[q], scalar_product(i, j, n, lam))
        for i in range(n)
        for j in range(n)
        for q in (QPLUS, QMINUS)
    )
    ok = True
    for _ in range(samples):
        F = random_element(n, rng)
        for q in (QPLUS, QMINUS):
            if measure_integral(apply(ops[q], F), lam):
                ok = False
            for i in range(n):
                if measure_integral(apply(OspOperator(q, n, lam, site=i), F), lam):
                    ok = False
    report["measure invariant at t = lambda"] = ok
    report["non-invariance witness"] = non_invariance_witness(n, lam)
    return report


def non_invariance_witness(n: int, lam=None) -> Optional[dict]:
    """A simple F with nonzero integral of Qt_+ F against the measure with t_0 != lambda."""
    lam = var("lambda") if lam is None else as_poly(lam)
    t = {i: lam for i in range(n)}
    t[0] = var("t_0")
    F = GrassmannElement.psi(0, n)
    val = measure_integral(apply(OspOperator(QPLUS, n, lam), F), t)
    if not val:
        return None
    return {"F": str(F), "t": "t_0 at vertex 0, lambda elsewhere", "integral": str(val)}


def partition_products_annihilated(n: int, seed: int = 0, trials: int = 10, lam=None) -> bool:
    """prod f_C over random set partitions is killed by Qt_pm."""
    lam = var("lambda") if lam is None else as_poly(lam)
    rng = random.Random(seed)
    for _ in range(trials):
        labels = [rng.randrange(n) for _ in range(n)]
        blocks: Dict[int, List[int]] = {}
        for v, b in enumerate(labels):
            blocks.setdefault(b, []).append(v)
        prod = gprod((f_lambda(b, n, lam) for b in blocks.values()), n)
        for q in (QPLUS, QMINUS):
            if apply(OspOperator(q, n, lam), prod):
                return False
    return True
