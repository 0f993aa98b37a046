"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a tuple of ``(name, exponent)`` pairs sorted by name, with
no zero exponents; ``()`` is the unit monomial.  Coefficients are ``int``
or :class:`fractions.Fraction` (a fraction with denominator 1 is always
stored as ``int``).  Polynomials are immutable.

JSON form::

    {"terms": [{"coef": "-3/2", "monomial": {"lambda": 2, "w_{0,1}": 1}}]}

with terms listed in ascending order of the monomial tuple, i.e.
lexicographic on the sorted symbol names and, for equal names, on the
exponent.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import NotDivisible

Monomial = Tuple[Tuple[str, int], ...]
Coefficient = Union[int, Fraction]

UNIT: Monomial = ()


class Symbol:
    """An interned indeterminate.  ``Symbol("q") is Symbol("q")``."""

    __slots__ = ("name",)
    _registry: Dict[str, "Symbol"] = {}
    _lock = threading.Lock()

    def __new__(cls, name: str) -> "Symbol":
        sym = cls._registry.get(name)
        if sym is not None:
            return sym
        with cls._lock:
            sym = cls._registry.get(name)
            if sym is None:
                sym = object.__new__(cls)
                sym.name = name
                cls._registry[name] = sym
        return sym

    def __reduce__(self):
        return (Symbol, (self.name,))

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"

    def __str__(self) -> str:
        return self.name

    def __lt__(self, other: "Symbol") -> bool:
        return self.name < other.name

    def poly(self) -> "Polynomial":
        return Polynomial.var(self.name)


def _name(s: Union[str, Symbol]) -> str:
    return s.name if isinstance(s, Symbol) else s


def _norm(c: Coefficient) -> Coefficient:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def parse_coef(text: str) -> Coefficient:
    """Parse ``"3"``, ``"-3/2"`` (ASCII or Unicode minus)."""
    return _norm(Fraction(text.replace("−", "-").strip()))


def format_coef(c: Coefficient) -> str:
    return str(c)


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        na, ea = a[i]
        nb, eb = b[j]
        if na == nb:
            out.append((na, ea + eb))
            i += 1
            j += 1
        elif na < nb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """``a / b`` or ``None`` when ``b`` does not divide ``a``."""
    da = dict(a)
    for name, e in b:
        have = da.get(name, 0)
        if have < e:
            return None
        if have == e:
            del da[name]
        else:
            da[name] = have - e
    return tuple(sorted(da.items()))


def make_monomial(exps: Mapping[Union[str, Symbol], int] | Monomial) -> Monomial:
    items = exps.items() if isinstance(exps, Mapping) else exps
    out: Dict[str, int] = {}
    for k, e in items:
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            out[_name(k)] = out.get(_name(k), 0) + e
    return tuple(sorted(out.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Polynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coefficient] | None = None):
        d: Dict[Monomial, Coefficient] = {}
        if terms:
            for m, c in terms.items():
                c = _norm(Fraction(c) if isinstance(c, str) else c)
                if c:
                    m = make_monomial(m)
                    c = _norm(d.get(m, 0) + c)
                    if c:
                        d[m] = c
                    else:
                        d.pop(m, None)
        self._terms = d
        self._hash = None

    @classmethod
    def _raw(cls, d: Dict[Monomial, Coefficient]) -> "Polynomial":
        p = object.__new__(cls)
        p._terms = d
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Coefficient) -> "Polynomial":
        c = _norm(c)
        return cls._raw({UNIT: c} if c else {})

    @classmethod
    def var(cls, name: Union[str, Symbol]) -> "Polynomial":
        name = _name(name)
        Symbol(name)
        return cls._raw({((name, 1),): 1})

    @classmethod
    def monomial(cls, m: Monomial | Mapping, c: Coefficient = 1) -> "Polynomial":
        return cls({make_monomial(m): c})

    # -- access ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Coefficient]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT in self._terms)

    def constant_term(self) -> Coefficient:
        return self._terms.get(UNIT, 0)

    def variables(self) -> set[str]:
        return {name for m in self._terms for name, _ in m}

    def degree(self, var: Union[str, Symbol, None] = None) -> int:
        """Total degree, or degree in ``var``; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(mono_degree(m) for m in self._terms)
        var = _name(var)
        return max(dict(m).get(var, 0) for m in self._terms)

    def min_degree(self, var: Union[str, Symbol]) -> int:
        if not self._terms:
            return -1
        var = _name(var)
        return min(dict(m).get(var, 0) for m in self._terms)

    def coefficient(self, var: Union[str, Symbol], k: int) -> "Polynomial":
        """Coefficient of ``var**k``, as a polynomial in the other symbols."""
        var = _name(var)
        out: Dict[Monomial, Coefficient] = {}
        for m, c in self._terms.items():
            d = dict(m)
            if d.get(var, 0) == k:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        return Polynomial._raw(out)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        if len(self._terms) < len(other._terms):
            a, b = other, self
        else:
            a, b = self, other
        d = dict(a._terms)
        for m, c in b._terms.items():
            s = d.get(m)
            if s is None:
                d[m] = c
            else:
                s = _norm(s + c)
                if s:
                    d[m] = s
                else:
                    del d[m]
        return Polynomial._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Coefficient) -> "Polynomial":
        c = _norm(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Polynomial._raw({m: _norm(v * c) for m, v in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        ta, tb = self._terms, other._terms
        if not ta or not tb:
            return ZERO
        if len(tb) == 1 and UNIT in tb:
            return self.scale(tb[UNIT])
        if len(ta) == 1 and UNIT in ta:
            return other.scale(ta[UNIT])
        d: Dict[Monomial, Coefficient] = {}
        get = d.get
        for ma, ca in ta.items():
            for mb, cb in tb.items():
                m = mono_mul(ma, mb)
                d[m] = get(m, 0) + ca * cb
        return Polynomial._raw({m: _norm(c) for m, c in d.items() if c})

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c) -> "Polynomial":
        if isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1) / c)
        return NotImplemented

    def divexact(self, m: Monomial | Mapping) -> "Polynomial":
        """Quotient by a monomial; raises :class:`NotDivisible` if any term is not divisible."""
        m = make_monomial(m) if isinstance(m, Mapping) else m
        out: Dict[Monomial, Coefficient] = {}
        for mono, c in self._terms.items():
            q = mono_div(mono, m)
            if q is None:
                raise NotDivisible(f"term {_mono_str(mono)} not divisible by {_mono_str(m)}")
            out[q] = c
        return Polynomial._raw(out)

    def substitute(self, bindings: Mapping[Union[str, Symbol], "Polynomial | Coefficient"]) -> "Polynomial":
        """Simultaneous substitution of symbols by polynomials."""
        if not bindings:
            return self
        b = {_name(k): _coerce(v) for k, v in bindings.items()}
        powers: Dict[Tuple[str, int], Polynomial] = {}

        def power(name: str, e: int) -> Polynomial:
            key = (name, e)
            p = powers.get(key)
            if p is None:
                p = b[name] ** e
                powers[key] = p
            return p

        acc: Dict[Monomial, Coefficient] = {}
        for mono, c in self._terms.items():
            rest = []
            factor = None
            for name, e in mono:
                if name in b:
                    f = power(name, e)
                    factor = f if factor is None else factor * f
                else:
                    rest.append((name, e))
            rest_m = tuple(rest)
            if factor is None:
                acc[rest_m] = acc.get(rest_m, 0) + c
                continue
            for fm, fc in factor._terms.items():
                m = mono_mul(rest_m, fm)
                acc[m] = acc.get(m, 0) + c * fc
        return Polynomial._raw({m: _norm(v) for m, v in acc.items() if v})

    def evaluate(self, values: Mapping[Union[str, Symbol], Coefficient]) -> "Polynomial":
        return self.substitute({k: Polynomial.const(v) for k, v in values.items()})

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- presentation ---------------------------------------------------

    def sorted_terms(self):
        """Terms in the documented JSON order."""
        return sorted(self._terms.items())

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coef": format_coef(c), "monomial": {k: e for k, e in m}}
                for m, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Polynomial":
        return cls({make_monomial(t["monomial"]): parse_coef(str(t["coef"])) for t in obj["terms"]})

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        order = sorted(self._terms.items(), key=lambda mc: (-mono_degree(mc[0]), mc[0]))
        parts = []
        for m, c in order:
            neg = c < 0
            a = -c if neg else c
            if not m:
                body = str(a)
            elif a == 1:
                body = _mono_str(m)
            else:
                body = f"{a}*{_mono_str(m)}"
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in m)


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    if isinstance(x, Symbol):
        return Polynomial.var(x.name)
    return NotImplemented


def as_poly(x) -> Polynomial:
    p = _coerce(x)
    if p is NotImplemented:
        if isinstance(x, str):
            return parse_poly_token(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Polynomial")
    return p


def parse_poly_token(text: str) -> Polynomial:
    """A rational literal or a single symbol name."""
    text = text.strip()
    try:
        return Polynomial.const(parse_coef(text))
    except (ValueError, ZeroDivisionError):
        return Polynomial.var(text)


def poly_sum(items: Iterable[Polynomial]) -> Polynomial:
    acc: Dict[Monomial, Coefficient] = {}
    for p in items:
        for m, c in p._terms.items():
            acc[m] = acc.get(m, 0) + c
    return Polynomial._raw({m: _norm(c) for m, c in acc.items() if c})


def poly_prod(items: Iterable[Polynomial]) -> Polynomial:
    result = ONE
    for p in items:
        result = result * p
    return result


def var(name: Union[str, Symbol]) -> Polynomial:
    return Polynomial.var(name)


def weight_name(prefix: str, vertices: Iterable[int]) -> str:
    """Canonical generated-weight name, e.g. ``weight_name("w", (4, 0, 1)) == "w_{0,1,4}"``."""
    return f"{prefix}_{{{','.join(str(v) for v in sorted(vertices))}}}"


ZERO = Polynomial._raw({})
ONE = Polynomial._raw({UNIT: 1})
LAMBDA = "lambda"


# functional aliases

def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def poly_substitute(p: Polynomial, bindings) -> Polynomial:
    return p.substitute(bindings)


def poly_divexact(p: Polynomial, m) -> Polynomial:
    return p.divexact(m)
