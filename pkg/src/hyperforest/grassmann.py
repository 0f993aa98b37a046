"""Finite Grassmann algebra on generators psibar_i, psi_i with polynomial coefficients.

Keys are ints with an interleaved layout: bit ``2i`` is psibar_i and bit
``2i+1`` is psi_i, so increasing bit position is the canonical generator
order psibar_0, psi_0, psibar_1, psi_1, ...  The pair psibar_i psi_i sits in
adjacent bits, which keeps tau products and Berezin stripping sign-free.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from .errors import CapExceeded, ConstantTerm, DimensionMismatch, OddInput
from .ring import ONE, ZERO, Polynomial, as_poly, poly_sum

DEFAULT_VERTEX_CAP = 16
vertex_cap = DEFAULT_VERTEX_CAP

PSI = "psi"
PSIBAR = "psibar"
SUM = "sum"

Coef = Union[Polynomial, int]


def _check_n(n: int) -> None:
    if n > vertex_cap:
        raise CapExceeded("vertex", n, vertex_cap)


def psibar_bit(i: int) -> int:
    return 1 << (2 * i)


def psi_bit(i: int) -> int:
    return 1 << (2 * i + 1)


def pair_bits(i: int) -> int:
    return 3 << (2 * i)


def key_from_masks(psibar_mask: int, psi_mask: int) -> int:
    key = 0
    i = 0
    while psibar_mask >> i or psi_mask >> i:
        if psibar_mask >> i & 1:
            key |= psibar_bit(i)
        if psi_mask >> i & 1:
            key |= psi_bit(i)
        i += 1
    return key


def masks_of(key: int) -> Tuple[int, int]:
    """Split a key into ``(psibar_mask, psi_mask)`` vertex bitsets."""
    pb = p = 0
    i = 0
    while key >> (2 * i):
        if key >> (2 * i) & 1:
            pb |= 1 << i
        if key >> (2 * i + 1) & 1:
            p |= 1 << i
        i += 1
    return pb, p


def tau_key(vertices: Iterable[int]) -> int:
    key = 0
    for i in vertices:
        key |= pair_bits(i)
    return key


def key_parity(key: int) -> int:
    return key.bit_count() & 1


@lru_cache(maxsize=1 << 20)
def mul_sign(a: int, b: int) -> int:
    """Sign of reordering (gens of a)(gens of b) into canonical order; keys must be disjoint."""
    s = 0
    while b:
        low = b & -b
        s += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if s & 1 else 1


class GrassmannElement:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[int, Coef] | None = None):
        _check_n(n)
        self.n = n
        d: Dict[int, Polynomial] = {}
        if terms:
            limit = 1 << (2 * n)
            for k, c in terms.items():
                if k < 0 or k >= limit:
                    raise ValueError(f"key {k:#x} out of range for n={n}")
                c = as_poly(c)
                if c:
                    d[k] = d[k] + c if k in d else c
                    if not d[k]:
                        del d[k]
        self._terms = d

    @classmethod
    def _raw(cls, n: int, d: Dict[int, Polynomial]) -> "GrassmannElement":
        e = object.__new__(cls)
        e.n = n
        e._terms = d
        return e

    # -- constructors ---------------------------------------------------

    @classmethod
    def scalar(cls, c: Coef, n: int) -> "GrassmannElement":
        _check_n(n)
        c = as_poly(c)
        return cls._raw(n, {0: c} if c else {})

    @classmethod
    def zero(cls, n: int) -> "GrassmannElement":
        return cls.scalar(0, n)

    @classmethod
    def one(cls, n: int) -> "GrassmannElement":
        return cls.scalar(1, n)

    @classmethod
    def psi(cls, i: int, n: int) -> "GrassmannElement":
        return cls(n, {psi_bit(i): ONE})

    @classmethod
    def psibar(cls, i: int, n: int) -> "GrassmannElement":
        return cls(n, {psibar_bit(i): ONE})

    @classmethod
    def monomial(cls, key: int, n: int, c: Coef = 1) -> "GrassmannElement":
        return cls(n, {key: c})

    # -- access ---------------------------------------------------------

    @property
    def terms(self) -> Dict[int, Polynomial]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, key: int) -> Polynomial:
        return self._terms.get(key, ZERO)

    def scalar_part(self) -> Polynomial:
        return self._terms.get(0, ZERO)

    def is_even(self) -> bool:
        return all(not key_parity(k) for k in self._terms)

    def is_odd(self) -> bool:
        return all(key_parity(k) for k in self._terms)

    def even_part(self) -> "GrassmannElement":
        return GrassmannElement._raw(self.n, {k: c for k, c in self._terms.items() if not key_parity(k)})

    def odd_part(self) -> "GrassmannElement":
        return GrassmannElement._raw(self.n, {k: c for k, c in self._terms.items() if key_parity(k)})

    def is_scalar(self) -> bool:
        return all(k == 0 for k in self._terms)

    # -- arithmetic -----------------------------------------------------

    def _same(self, other: "GrassmannElement") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"n={self.n} vs n={other.n}")

    def __add__(self, other) -> "GrassmannElement":
        other = _lift(other, self.n)
        if other is NotImplemented:
            return NotImplemented
        self._same(other)
        d = dict(self._terms)
        for k, c in other._terms.items():
            s = d[k] + c if k in d else c
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return GrassmannElement._raw(self.n, d)

    __radd__ = __add__

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement._raw(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "GrassmannElement":
        other = _lift(other, self.n)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "GrassmannElement":
        other = _lift(other, self.n)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Coef) -> "GrassmannElement":
        c = as_poly(c)
        if not c:
            return GrassmannElement._raw(self.n, {})
        out = {}
        for k, v in self._terms.items():
            p = v * c
            if p:
                out[k] = p
        return GrassmannElement._raw(self.n, out)

    def __mul__(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            return gmul(self, other)
        if isinstance(other, (int, Polynomial)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "GrassmannElement":
        if isinstance(other, (int, Polynomial)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "GrassmannElement":
        result = GrassmannElement.one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def map_coefficients(self, fn) -> "GrassmannElement":
        out = {}
        for k, c in self._terms.items():
            p = fn(c)
            if p:
                out[k] = p
        return GrassmannElement._raw(self.n, out)

    def substitute(self, bindings) -> "GrassmannElement":
        return self.map_coefficients(lambda c: c.substitute(bindings))

    def __eq__(self, other) -> bool:
        other = _lift(other, self.n) if not isinstance(other, GrassmannElement) else other
        if other is NotImplemented:
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    # -- presentation ---------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"GrassmannElement(n={self.n}, {render(self)})"


def _lift(x, n: int):
    if isinstance(x, GrassmannElement):
        return x
    if isinstance(x, (int, Polynomial)):
        return GrassmannElement.scalar(x, n)
    return NotImplemented


def key_generators(key: int) -> List[str]:
    out = []
    b = 0
    while key >> b:
        if key >> b & 1:
            out.append(("pb" if b % 2 == 0 else "p") + str(b // 2))
        b += 1
    return out


def render(a: GrassmannElement) -> str:
    """Terms in canonical key order, ``(coef)·pb0 p0 + ...``; the unit key renders as ``1``."""
    if not a._terms:
        return "0"
    parts = []
    for k in sorted(a._terms):
        gens = " ".join(key_generators(k)) or "1"
        parts.append(f"({a._terms[k]})·{gens}")
    return " + ".join(parts)


def gmul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    if a.n != b.n:
        raise DimensionMismatch(f"n={a.n} vs n={b.n}")
    ta, tb = a._terms, b._terms
    if not ta or not tb:
        return GrassmannElement._raw(a.n, {})
    if len(tb) == 1 and 0 in tb:
        return a.scale(tb[0])
    if len(ta) == 1 and 0 in ta:
        return b.scale(ta[0])
    acc: Dict[int, List[Polynomial]] = {}
    for ka, ca in ta.items():
        for kb, cb in tb.items():
            if ka & kb:
                continue
            p = ca * cb
            if mul_sign(ka, kb) < 0:
                p = -p
            acc.setdefault(ka | kb, []).append(p)
    out = {}
    for k, ps in acc.items():
        s = ps[0] if len(ps) == 1 else poly_sum(ps)
        if s:
            out[k] = s
    return GrassmannElement._raw(a.n, out)


def gprod(items: Iterable[GrassmannElement], n: int) -> GrassmannElement:
    result = GrassmannElement.one(n)
    for x in items:
        result = gmul(result, x)
    return result


def gexp(a: GrassmannElement, summands: Sequence[GrassmannElement] | None = None) -> GrassmannElement:
    """exp of an even element with no constant term.

    With ``summands`` (pairwise commuting, each squaring to zero, adding up
    to ``a``) the product form prod(1 + a_k) is used; otherwise the series.
    """
    if not a.is_even():
        raise OddInput("exponential needs an even element")
    if a.scalar_part():
        raise ConstantTerm("exponential of an element with a constant term")
    if summands is not None:
        return gprod((GrassmannElement.one(a.n) + s for s in summands), a.n)
    result = GrassmannElement.one(a.n)
    power = GrassmannElement.one(a.n)
    k = 0
    while True:
        k += 1
        power = gmul(power, a)
        if not power:
            return result
        power = power.scale(Polynomial.const(Fraction(1, k)))
        result = result + power


def _deriv_key(key: int, bit: int) -> Tuple[int, int] | None:
    if not key & bit:
        return None
    sign = -1 if (key & (bit - 1)).bit_count() & 1 else 1
    return key ^ bit, sign


def gderiv(a: GrassmannElement, which: str, i: Union[int, str] = SUM) -> GrassmannElement:
    """Left derivative by psi_i (``which="psi"``) or psibar_i; ``i=SUM`` sums over all vertices."""
    if which not in (PSI, PSIBAR):
        raise ValueError(f"which must be {PSI!r} or {PSIBAR!r}")
    verts = range(a.n) if i == SUM else (i,)
    acc: Dict[int, List[Polynomial]] = {}
    for v in verts:
        bit = psi_bit(v) if which == PSI else psibar_bit(v)
        for k, c in a._terms.items():
            r = _deriv_key(k, bit)
            if r is not None:
                nk, s = r
                acc.setdefault(nk, []).append(c if s > 0 else -c)
    out = {}
    for k, ps in acc.items():
        s = poly_sum(ps)
        if s:
            out[k] = s
    return GrassmannElement._raw(a.n, out)


def d_psi(a: GrassmannElement, i: Union[int, str] = SUM) -> GrassmannElement:
    return gderiv(a, PSI, i)


def d_psibar(a: GrassmannElement, i: Union[int, str] = SUM) -> GrassmannElement:
    return gderiv(a, PSIBAR, i)


def berezin(a: GrassmannElement, B: Iterable[int], t: Mapping[int, Coef] | Coef | None = None) -> GrassmannElement:
    """Integrate out the vertices in ``B`` against prod dpsi_i dpsibar_i exp(t_i psibar_i psi_i).

    ``t`` is a per-vertex map or a single value for all of ``B``; the
    normalization is ``∫ dpsi dpsibar psibar psi = 1``.
    """
    B = sorted(set(B))
    if isinstance(t, Mapping):
        tv = {i: as_poly(t.get(i, 0)) for i in B}
    else:
        c = as_poly(0 if t is None else t)
        tv = {i: c for i in B}
    cur: Dict[int, Polynomial] = dict(a._terms)
    for i in B:
        pb = pair_bits(i)
        nxt: Dict[int, List[Polynomial]] = {}
        ti = tv[i]
        for k, c in cur.items():
            occ = k & pb
            if occ == pb:
                nxt.setdefault(k ^ pb, []).append(c)
            elif occ == 0:
                if ti:
                    nxt.setdefault(k, []).append(c * ti)
        cur = {}
        for k, ps in nxt.items():
            s = ps[0] if len(ps) == 1 else poly_sum(ps)
            if s:
                cur[k] = s
    return GrassmannElement._raw(a.n, cur)


def integrate_all(a: GrassmannElement, t: Mapping[int, Coef] | Coef | None = None) -> Polynomial:
    """Full Berezin integral over every vertex, returned as a scalar polynomial."""
    r = berezin(a, range(a.n), t)
    return r.scalar_part()


def integrate_product(
    factors: Sequence[Tuple[int, GrassmannElement]],
    n: int,
    t: Mapping[int, Coef] | Coef | None = None,
    prefix: GrassmannElement | None = None,
) -> Polynomial:
    """Integral of ``prefix * prod(factors)`` over all vertices, eliminating vertices early.

    Each factor comes with the vertex bitset it involves and must be even,
    so the factors commute.  ``prefix`` may have any parity; it is kept
    leftmost.  A vertex is integrated out as soon as every factor touching
    it has been multiplied in, which is valid because the remaining
    factors are even and free of that vertex's generators.
    """
    pending = list(factors)
    cur = GrassmannElement.one(n) if prefix is None else prefix
    order = _elimination_order(n, [m for m, _ in pending])
    done = set()
    for v in order:
        keep = []
        for m, f in pending:
            if m >> v & 1:
                cur = gmul(cur, f)
            else:
                keep.append((m, f))
        pending = keep
        tmap = {v: (t.get(v, 0) if isinstance(t, Mapping) else (0 if t is None else t))}
        cur = berezin(cur, [v], tmap)
        done.add(v)
        if not cur:
            return ZERO
    for _, f in pending:
        cur = gmul(cur, f)
    return cur.scalar_part()


def _elimination_order(n: int, masks: Sequence[int]) -> List[int]:
    """Greedy order: next vertex is the one whose elimination pulls in the fewest new vertices."""
    remaining = set(range(n))
    pulled = 0
    order = []
    live = list(masks)
    while remaining:
        best = None
        for v in sorted(remaining):
            span = pulled
            for m in live:
                if m >> v & 1:
                    span |= m
            cost = (span & ~pulled).bit_count()
            if best is None or cost < best[0]:
                best = (cost, v, span)
        _, v, span = best
        order.append(v)
        remaining.discard(v)
        pulled = span & ~(1 << v)
        for u in order:
            pulled &= ~(1 << u)
        live = [m for m in live if not m >> v & 1]
    return order


def elements_basis(n: int) -> Iterator[int]:
    """All 4**n keys in ascending order."""
    _check_n(n)
    return iter(range(1 << (2 * n)))
