"""Finitely presented abelian groups of divisor classes.

A presentation is ``Z^n / (row span of R)``.  Membership and equality are
decided through the Smith decomposition ``U R V = D``: a vector ``x`` lies in
the row span iff ``w = x V`` has ``d_i | w_i`` for the nonzero invariant
factors and ``w_i = 0`` in the remaining coordinates.

For fibrations, generator 0 is the fiber class ``[F]`` and generators
``1..r`` are the reduced multiple fibers ``[F_i]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    if any(len(row) != inner for row in a):
        raise ValueError("shape mismatch in matmul")
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    D: Matrix
    U: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(R: Sequence[Sequence[int]], n_cols: int | None = None) -> SmithDecomposition:
    """Smith normal form with unimodular transforms, ``U @ R @ V == D``.

    The pivot is always the nonzero entry of least absolute value in the
    remaining block, ties broken by row-major position, so the output is
    deterministic.  ``n_cols`` is only needed for a matrix with no rows.
    """
    A = [[int(x) for x in row] for row in R]
    rows = len(A)
    cols = len(A[0]) if A else (n_cols or 0)
    if any(len(row) != cols for row in A):
        raise ValueError("ragged matrix")
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        for M in (A, U):
            rd, rs = M[dst], M[src]
            for j in range(len(rd)):
                rd[j] += k * rs[j]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for M in (A, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    v = A[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            if any(A[i][t] for i in range(t + 1, rows)) or any(A[t][j] for j in range(t + 1, cols)):
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if A[t][t] < 0:
            for M in (A, U):
                M[t] = [-x for x in M[t]]
    return SmithDecomposition(A, U, V)


@dataclass(frozen=True)
class RelationPresentation:
    n_generators: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.n_generators < 1:
            raise ValueError("a presentation needs at least one generator")
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        for k, r in enumerate(rels):
            if len(r) != self.n_generators:
                raise ValueError(f"relation {k} has length {len(r)}, expected {self.n_generators}")
        object.__setattr__(self, "relations", rels)

    @cached_property
    def smith(self) -> SmithDecomposition:
        return smith_normal_form(self.relations, n_cols=self.n_generators)

    def coordinates(self, x: Sequence[int]) -> list[int]:
        """Coordinates ``x V`` in which the relation lattice is diagonal."""
        if len(x) != self.n_generators:
            raise ValueError(f"class vector has length {len(x)}, expected {self.n_generators}")
        V = self.smith.V
        n = self.n_generators
        return [sum(x[i] * V[i][j] for i in range(n)) for j in range(n)]

    def invariant_factors(self) -> list[int]:
        """``[d_1, ..., d_n]`` with zeros for free summands."""
        diag = self.smith.diagonal
        return diag + [0] * (self.n_generators - len(diag))

    def is_zero(self, x: Sequence[int]) -> bool:
        w = self.coordinates(x)
        return all((w[i] % d == 0) if d else w[i] == 0 for i, d in enumerate(self.invariant_factors()))

    def order_of(self, x: Sequence[int]) -> int:
        """Order of the class of ``x``; 0 means infinite."""
        from math import lcm

        out = 1
        for w, d in zip(self.coordinates(x), self.invariant_factors()):
            if d == 0:
                if w:
                    return 0
            elif w % d:
                out = lcm(out, d // gcd(w, d))
        return out

    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors():
            if d:
                out *= d
        return out


def classes_equal(P: RelationPresentation, x: Sequence[int], y: Sequence[int]) -> bool:
    if len(x) != P.n_generators or len(y) != P.n_generators:
        raise ValueError(
            f"class vectors must have length {P.n_generators}, got {len(x)} and {len(y)}"
        )
    return P.is_zero([a - b for a, b in zip(x, y)])


@dataclass(frozen=True, order=True)
class FiberDecomposition:
    d: int
    a: tuple[int, ...] = field(default=())

    def vector(self) -> tuple[int, ...]:
        return (self.d,) + tuple(self.a)


class DegenerateFiberClass(ValueError):
    pass


def _check_fiber_setup(P: RelationPresentation, multiplicities: Sequence[int], c: Sequence[int]):
    if len(multiplicities) + 1 != P.n_generators:
        raise ValueError(
            f"{len(multiplicities)} multiplicities need {len(multiplicities) + 1} generators, "
            f"presentation has {P.n_generators}"
        )
    if any(m < 1 for m in multiplicities):
        raise ValueError(f"multiplicities must be positive, got {list(multiplicities)}")
    if len(c) != P.n_generators:
        raise ValueError(f"class vector has length {len(c)}, expected {P.n_generators}")
    fiber = [1] + [0] * (P.n_generators - 1)
    if P.order_of(fiber) != 0:
        raise DegenerateFiberClass("degenerate fiber class: [F] has finite order in the presented group")


def solve_fiber_multiple(P: RelationPresentation, a: Sequence[int], c: Sequence[int]) -> int | None:
    """The unique integer d with ``d[F] + sum a_i [F_i] = c``, or None.

    Requires ``[F]`` of infinite order, which makes d unique when it exists.
    """
    rest = [0] + list(a)
    w = P.coordinates([ri - ci for ri, ci in zip(rest, c)])
    f = P.smith.V[0]
    factors = P.invariant_factors()
    d = None
    for wi, fi, di in zip(w, f, factors):
        if di == 0 and fi:
            if wi % fi:
                return None
            d = -wi // fi
            break
    if d is None:
        raise DegenerateFiberClass("degenerate fiber class: [F] has finite order in the presented group")
    for wi, fi, di in zip(w, f, factors):
        v = wi + d * fi
        if (v % di) if di else v:
            return None
    return d


def fiber_solutions(P: RelationPresentation, multiplicities: Sequence[int], c: Sequence[int]) -> list[FiberDecomposition]:
    """All (d, a) with 0 <= a_i < m_i and ``d[F] + sum a_i[F_i] = c``, any sign of d."""
    _check_fiber_setup(P, multiplicities, c)
    out = []
    for a in itertools.product(*(range(m) for m in multiplicities)):
        d = solve_fiber_multiple(P, a, c)
        if d is not None:
            out.append(FiberDecomposition(d, tuple(a)))
    out.sort()
    return out


def enumerate_decompositions(P: RelationPresentation, multiplicities: Sequence[int], c: Sequence[int]) -> list[FiberDecomposition]:
    """Effective decompositions ``d[F] + sum a_i[F_i] = c`` with d >= 0 and 0 <= a_i < m_i.

    Sorted lexicographically by (d, a).
    """
    return [s for s in fiber_solutions(P, multiplicities, c) if s.d >= 0]


def _check_log_data(n, u, v):
    if not (len(n) == len(u) == len(v)):
        raise ValueError("n, u, v must have equal lengths")
    for i, (ni, ui, vi) in enumerate(zip(n, u, v)):
        if ni < 1:
            raise ValueError(f"fiber {i}: multiplicity must be positive, got {ni}")
        if gcd(gcd(ni, ui), vi) != 1:
            raise ValueError(f"fiber {i}: gcd(n, u, v) = gcd({ni}, {ui}, {vi}) must be 1")
    su = sum((Fraction(ui, ni) for ni, ui in zip(n, u)), Fraction(0))
    sv = sum((Fraction(vi, ni) for ni, vi in zip(n, v)), Fraction(0))
    if su or sv:
        raise ProjectivityError(
            "surface is not projective: the torsion points zeta_i = (u_i + v_i*omega)/n_i "
            f"must sum to zero in C, got sum u_i/n_i = {su}, sum v_i/n_i = {sv}"
        )


class ProjectivityError(ValueError):
    pass


def twist_group(n: Sequence[int], u: Sequence[int], v: Sequence[int]) -> list[tuple[Fraction, Fraction]]:
    """Subgroup of (Q/Z)^2 generated by the pairs (u_i/n_i, v_i/n_i).

    Elements are reduced into [0, 1)^2 and returned sorted; the identity
    ``(0, 0)`` comes first.
    """
    _check_log_data(n, u, v)

    def red(x: Fraction) -> Fraction:
        return x - (x.numerator // x.denominator)

    gens = {(red(Fraction(ui, ni)), red(Fraction(vi, ni))) for ni, ui, vi in zip(n, u, v)}
    gens.discard((Fraction(0), Fraction(0)))
    seen = {(Fraction(0), Fraction(0))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x, y in frontier:
            for gx, gy in gens:
                e = (red(x + gx), red(y + gy))
                if e not in seen:
                    seen.add(e)
                    nxt.append(e)
        frontier = nxt
    return sorted(seen)
