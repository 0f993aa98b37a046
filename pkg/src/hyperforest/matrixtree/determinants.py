"""Leibniz determinants over commutative rings and the graphical expansions.

Entries are :class:`Polynomial` values or even :class:`GrassmannElement`
values.  Even Grassmann elements commute, so the usual formula applies.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import NonCommutingEntries, SizeCap, SizeMismatch
from ..grassmann import GrassmannElement
from ..ring import ONE, ZERO

DET_CAP = 8

Matrix = Sequence[Sequence[object]]


def _ring_of(M: Matrix):
    """(zero, one) for the entry ring, validating Grassmann parity."""
    n = None
    for row in M:
        for x in row:
            if isinstance(x, GrassmannElement):
                if not x.is_even():
                    raise NonCommutingEntries("determinant entries must be even")
                if n is None:
                    n = x.n
    if n is None:
        return ZERO, ONE
    return GrassmannElement.zero(n), GrassmannElement.one(n)


def _sum(items, zero):
    acc = zero
    for x in items:
        acc = acc + x
    return acc


def perm_sign(p: Sequence[int]) -> int:
    inv = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                inv += 1
    return -1 if inv & 1 else 1


def cycles_of(p: Sequence[int]) -> List[Tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = p[j]
            out.append(tuple(cyc))
    return out


def square(M: Matrix) -> int:
    k = len(M)
    if any(len(row) != k for row in M):
        raise SizeMismatch("matrix is not square")
    return k


def det(M: Matrix, cap: int = DET_CAP):
    """Leibniz sum over all permutations."""
    k = square(M)
    if k > cap:
        raise SizeCap(f"determinant size {k} exceeds cap {cap}")
    zero, one = _ring_of(M)
    if k == 0:
        return one
    terms = []
    for p in permutations(range(k)):
        prod = M[0][p[0]]
        for i in range(1, k):
            if not prod:
                break
            prod = prod * M[i][p[i]]
        if prod:
            terms.append(prod if perm_sign(p) > 0 else -prod)
    return _sum(terms, zero)


def submatrix(M: Matrix, rows: Sequence[int], cols: Sequence[int]) -> List[List[object]]:
    return [[M[r][c] for c in cols] for r in rows]


def minor(M: Matrix, rows: Sequence[int], cols: Sequence[int]):
    """Determinant of the rows/cols submatrix; the empty minor is 1."""
    if not rows:
        return _ring_of(M)[1]
    return det(submatrix(M, rows, cols))


def mat_add(A: Matrix, B: Matrix) -> List[List[object]]:
    if square(A) != square(B):
        raise SizeMismatch("matrices differ in size")
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A: Matrix) -> List[List[object]]:
    return [[-a for a in row] for row in A]


def outer(a: Sequence[object], b: Sequence[object]) -> List[List[object]]:
    return [[x * y for y in b] for x in a]


def det_sum_expansion(A: Matrix, B: Matrix):
    """Right-hand side of the determinant-of-a-sum expansion."""
    k = square(A)
    if square(B) != k:
        raise SizeMismatch("matrices differ in size")
    zero, _ = _ring_of([list(A[i]) + list(B[i]) for i in range(k)]) if k else (ZERO, ONE)
    full = range(k)
    terms = []
    for size in range(k + 1):
        for I in combinations(full, size):
            Ic = [x for x in full if x not in I]
            for J in combinations(full, size):
                Jc = [x for x in full if x not in J]
                eps = -1 if (sum(I) + sum(J)) & 1 else 1
                p = minor(A, I, J) * minor(B, Ic, Jc)
                if p:
                    terms.append(p if eps > 0 else -p)
    return _sum(terms, zero)


def det_sum_expansion_check(A: Matrix, B: Matrix) -> bool:
    return det(mat_add(A, B)) == det_sum_expansion(A, B)


# -- graphical expansions -----------------------------------------------


def permutation_digraphs(vertices: Sequence[int]) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """Arc sets of all permutation digraphs (disjoint directed cycles covering the vertices)."""
    vs = list(vertices)
    for p in permutations(range(len(vs))):
        yield tuple((vs[i], vs[p[i]]) for i in range(len(vs)))


def _arc_count_cycles(arcs: Sequence[Tuple[int, int]]) -> int:
    succ = dict(arcs)
    seen = set()
    count = 0
    for v in succ:
        if v not in seen:
            count += 1
            while v not in seen:
                seen.add(v)
                v = succ[v]
    return count


def perm_digraph_sum(C: Matrix, vertices: Optional[Sequence[int]] = None):
    """sum over permutation digraphs of (-1)^#cycles prod c_ij."""
    zero, one = _ring_of(C)
    vs = range(len(C)) if vertices is None else vertices
    terms = []
    for arcs in permutation_digraphs(vs):
        p = one
        for i, j in arcs:
            p = p * C[i][j]
            if not p:
                break
        if p:
            terms.append(-p if _arc_count_cycles(arcs) & 1 else p)
    return _sum(terms, zero)


def directed_paths(vertices: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All directed paths (vertex sequences, length 0 allowed) on subsets of ``vertices``."""
    vs = list(vertices)
    for size in range(1, len(vs) + 1):
        for sub in combinations(vs, size):
            yield from permutations(sub)


def _path_product(C: Matrix, path: Sequence[int], one):
    p = one
    for u, v in zip(path, path[1:]):
        p = p * C[u][v]
        if not p:
            break
    return p


def path_cycle_sum(C: Matrix, a: Sequence[object], b: Sequence[object]):
    """sum over digraphs made of one directed path s -> t plus disjoint cycles
    of (-1)^#cycles b_s a_t prod c_ij."""
    zero, one = _ring_of(C)
    k = len(C)
    terms = []
    for path in directed_paths(range(k)):
        p = b[path[0]] * a[path[-1]] * _path_product(C, path, one)
        if not p:
            continue
        rest = [v for v in range(k) if v not in path]
        q = perm_digraph_sum(C, rest) if rest else one
        terms.append(p * q)
    return _sum(terms, zero)


def full_path_sum(C: Matrix):
    """sum over the k! directed Hamiltonian paths of prod c_ij."""
    zero, one = _ring_of(C)
    k = len(C)
    return _sum((_path_product(C, p, one) for p in permutations(range(k))), zero)


def graphical_det_checks(
    C: Matrix,
    a: Optional[Sequence[object]] = None,
    b: Optional[Sequence[object]] = None,
    cycle_free: bool = False,
    cap: int = 5,
) -> Dict[str, bool]:
    """Check the permutation-digraph and path-digraph determinant expansions.

    With ``cycle_free`` the matrix is assumed to kill every closed walk
    product and the all-ones path formula is checked as well.
    """
    k = square(C)
    if k > cap:
        raise SizeCap(f"graphical expansion size {k} exceeds cap {cap}")
    zero, one = _ring_of(C)
    out: Dict[str, bool] = {}
    neg = det(mat_neg(C))
    out["permutation_digraphs"] = neg == perm_digraph_sum(C)
    if a is not None and b is not None:
        lhs = det(mat_add(outer(a, b), mat_neg(C)))
        out["path_digraphs"] = lhs == neg + path_cycle_sum(C, a, b)
    if cycle_free:
        ones = [one] * k
        out["hamiltonian_paths"] = det(mat_add(outer(ones, ones), mat_neg(C))) == full_path_sum(C)
    return out
