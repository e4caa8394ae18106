"""Integral exterior algebra on 2q generators.

Elements of Lambda^* H^1(V, Z) are stored as sparse maps from generator
subsets to nonzero integers.  Internally a subset is a bitmask (bit ``i - 1``
stands for ``e_i``); the public ``terms`` view uses ascending 1-based index
tuples.

The standard polarization is ``theta_std = sum_i e_i ^ e_{q+i}`` and the
fundamental class of the Picard torus is oriented so that
``theta_std^q / q!`` caps to ``+1`` (see :func:`cap_fundamental`).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Mapping

from .errors import InvariantViolation


def _indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def _merge_sign(left: int, right: int) -> int:
    """Sign of the permutation sorting the concatenation (left, right)."""
    inversions = 0
    r = right
    while r:
        low = r & -r
        # elements of `left` above this element of `right`
        inversions += (left & ~((low << 1) - 1)).bit_count()
        r ^= low
    return -1 if inversions & 1 else 1


class ExtElement:
    """An element of the exterior algebra on ``rank`` generators.

    Immutable.  Zero coefficients are never stored.

    >>> e1, e2 = ExtElement.generator(2, 1), ExtElement.generator(2, 2)
    >>> e2 ^ e1
    ExtElement(2, {(1, 2): -1})
    """

    __slots__ = ("_rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping | None = None):
        if rank < 0:
            raise ValueError(f"rank must be nonnegative, got {rank}")
        self._rank = rank
        self._hash = None
        clean: dict[int, int] = {}
        if terms:
            for key, coef in terms.items():
                if isinstance(key, int):
                    mask = key
                else:
                    key = tuple(key)
                    if any(b <= a for a, b in zip(key, key[1:])):
                        raise ValueError(f"index subset {key} is not strictly ascending")
                    if key and (key[0] < 1 or key[-1] > rank):
                        raise ValueError(f"index subset {key} out of range 1..{rank}")
                    mask = _mask(key)
                if mask >> rank:
                    raise ValueError(f"monomial mask {mask:b} exceeds rank {rank}")
                coef = int(coef)
                if coef:
                    clean[mask] = clean.get(mask, 0) + coef
                    if not clean[mask]:
                        del clean[mask]
        self._terms = clean

    @classmethod
    def _raw(cls, rank: int, terms: dict[int, int]) -> "ExtElement":
        obj = cls.__new__(cls)
        obj._rank = rank
        obj._terms = {k: v for k, v in terms.items() if v}
        obj._hash = None
        return obj

    @classmethod
    def scalar(cls, rank: int, value: int) -> "ExtElement":
        return cls._raw(rank, {0: int(value)})

    @classmethod
    def zero(cls, rank: int) -> "ExtElement":
        return cls._raw(rank, {})

    @classmethod
    def one(cls, rank: int) -> "ExtElement":
        return cls.scalar(rank, 1)

    @classmethod
    def generator(cls, rank: int, i: int) -> "ExtElement":
        if not 1 <= i <= rank:
            raise ValueError(f"generator index {i} out of range 1..{rank}")
        return cls._raw(rank, {1 << (i - 1): 1})

    @classmethod
    def monomial(cls, rank: int, indices: Iterable[int], coef: int = 1) -> "ExtElement":
        """Build ``coef * e_{i1} ^ e_{i2} ^ ...`` in the given (possibly unsorted) order."""
        out = cls.scalar(rank, coef)
        for i in indices:
            out = out ^ cls.generator(rank, i)
        return out

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def q(self) -> int:
        return self._rank // 2

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return {_indices(m): c for m, c in self._terms.items()}

    def items(self):
        """(mask, coefficient) pairs in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: (kv[0].bit_count(), _indices(kv[0])))

    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self._terms}

    def component(self, degree: int) -> "ExtElement":
        return ExtElement._raw(self._rank, {m: c for m, c in self._terms.items() if m.bit_count() == degree})

    def coefficient(self, indices: Iterable[int] = ()) -> int:
        return self._terms.get(_mask(indices), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_homogeneous(self, degree: int) -> bool:
        return all(m.bit_count() == degree for m in self._terms)

    # arithmetic

    def _check(self, other: "ExtElement") -> None:
        if not isinstance(other, ExtElement):
            raise TypeError(f"expected ExtElement, got {type(other).__name__}")
        if other._rank != self._rank:
            raise ValueError(f"rank mismatch: {self._rank} vs {other._rank}")

    def __add__(self, other):
        if isinstance(other, int):
            other = ExtElement.scalar(self._rank, other)
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return ExtElement._raw(self._rank, out)

    __radd__ = __add__

    def __neg__(self):
        return ExtElement._raw(self._rank, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = ExtElement.scalar(self._rank, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return ExtElement._raw(self._rank, {m: c * k for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def exact_div(self, k: int) -> "ExtElement":
        """Divide every coefficient by ``k``, which must divide all of them."""
        out = {}
        for m, c in self._terms.items():
            quo, rem = divmod(c, k)
            if rem:
                raise InvariantViolation(
                    f"coefficient {c} of {_indices(m)} is not divisible by {k}"
                )
            out[m] = quo
        return ExtElement._raw(self._rank, out)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == ExtElement.scalar(self._rank, other)
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self._rank == other._rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._rank, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{_indices(m)}: {c}" for m, c in self.items())
        return f"ExtElement({self._rank}, {{{body}}})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            mono = "".join(f"e{i}" for i in _indices(m))
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_pairs(self) -> list[list]:
        """Canonical serialization: ``[["i1.i2", coef], ...]``, scalar under ``""``."""
        return [[".".join(str(i) for i in _indices(m)), c] for m, c in self.items()]

    @classmethod
    def from_pairs(cls, rank: int, pairs) -> "ExtElement":
        terms = {}
        for key, coef in pairs:
            idx = tuple(int(s) for s in key.split(".")) if key else ()
            if idx in terms:
                raise ValueError(f"duplicate monomial {key!r}")
            terms[idx] = coef
        return cls(rank, terms)


@dataclass(frozen=True)
class SkewForm:
    """Antisymmetric integer ``2q x 2q`` matrix."""

    q: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = 2 * self.q
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"skew form for q={self.q} must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"matrix is not antisymmetric at ({i + 1}, {j + 1})")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def standard(cls, q: int) -> "SkewForm":
        n = 2 * q
        a = [[0] * n for _ in range(n)]
        for i in range(q):
            a[i][q + i] = 1
            a[q + i][i] = -1
        return cls(q, tuple(map(tuple, a)))

    @classmethod
    def from_upper(cls, q: int, upper: Mapping[tuple[int, int], int]) -> "SkewForm":
        n = 2 * q
        a = [[0] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not 1 <= i < j <= n:
                raise ValueError(f"need 1 <= i < j <= {n}, got ({i}, {j})")
            a[i - 1][j - 1] = v
            a[j - 1][i - 1] = -v
        return cls(q, tuple(map(tuple, a)))


def wedge(x: ExtElement, y: ExtElement) -> ExtElement:
    """Exterior product."""
    x._check(y)
    out: dict[int, int] = {}
    for mx, cx in x._terms.items():
        for my, cy in y._terms.items():
            if mx & my:
                continue
            m = mx | my
            out[m] = out.get(m, 0) + _merge_sign(mx, my) * cx * cy
    return ExtElement._raw(x._rank, out)


def two_form(s: SkewForm) -> ExtElement:
    n = 2 * s.q
    terms = {}
    for i in range(n):
        for j in range(i + 1, n):
            if s.entries[i][j]:
                terms[(1 << i) | (1 << j)] = s.entries[i][j]
    return ExtElement._raw(n, terms)


def theta_std(q: int) -> ExtElement:
    return two_form(SkewForm.standard(q))


def divided_power(t: ExtElement, n: int) -> ExtElement:
    """``t^n / n!`` for a homogeneous degree-2 element ``t``.

    The power is formed exactly and then divided; a remainder means the
    input was not an honest integral 2-form and raises InvariantViolation.
    """
    if n < 0:
        raise ValueError(f"exponent must be nonnegative, got {n}")
    if not t.is_homogeneous(2):
        raise ValueError(f"divided powers need a homogeneous degree-2 element, got degrees {sorted(t.degrees())}")
    power = ExtElement.one(t.rank)
    for _ in range(n):
        power = wedge(power, t)
    return power.exact_div(factorial(n))


def truncate(x: ExtElement, n: int) -> ExtElement:
    """Drop homogeneous components of degree > n (everything if n < 0)."""
    return ExtElement._raw(x.rank, {m: c for m, c in x._terms.items() if m.bit_count() <= n})


def orientation_sign(q: int) -> int:
    # theta_std^q / q! = (-1)^(q(q-1)/2) e_1...e_2q
    return -1 if (q * (q - 1) // 2) & 1 else 1


def cap_fundamental(x: ExtElement) -> ExtElement:
    """Cap with the fundamental class of the Picard torus.

    ``e_S`` goes to ``eps_q * sgn(S, S^c) * e_{S^c}`` where ``sgn`` is the
    sign of the shuffle sorting the concatenation ``(S, S^c)`` and
    ``eps_q = (-1)^(q(q-1)/2)`` orients the torus by ``theta_std``.
    Applying it twice multiplies a degree-k monomial by ``(-1)^k``.
    """
    if x.rank % 2:
        raise ValueError(f"cap product needs an even number of generators, got {x.rank}")
    full = (1 << x.rank) - 1
    eps = orientation_sign(x.rank // 2)
    out = {}
    for m, c in x._terms.items():
        comp = full ^ m
        out[comp] = eps * _merge_sign(m, comp) * c
    return ExtElement._raw(x.rank, out)


def numeric_degree(x: ExtElement) -> int:
    return x._terms.get(0, 0)


def chern_from_character(ch: ExtElement, dim: int) -> ExtElement:
    """Total Chern class from a Chern character via Newton's identities.

    ``ch`` must have only even-degree components; the degree-2k component is
    ``ch_k`` and the power sums are ``p_k = k! ch_k``.  The recursion
    ``k c_k = sum_{i=1..k} (-1)^(i-1) p_i c_{k-i}`` is solved exactly, and
    the result truncated at degree ``2 * dim``.
    """
    odd = sorted(d for d in ch.degrees() if d % 2)
    if odd:
        raise ValueError(f"Chern character has odd-degree components {odd}")
    rank = ch.rank
    top = min(dim, rank // 2)
    power_sums = [None] + [ch.component(2 * k) * factorial(k) for k in range(1, top + 1)]
    c = [ExtElement.one(rank)]
    for k in range(1, top + 1):
        acc = ExtElement.zero(rank)
        for i in range(1, k + 1):
            term = wedge(power_sums[i], c[k - i])
            acc = acc + term if i % 2 else acc - term
        c.append(acc.exact_div(k))
    total = ExtElement.zero(rank)
    for ck in c:
        total = total + ck
    return truncate(total, 2 * dim)


def exp_two_form(t: ExtElement) -> ExtElement:
    """``exp(t) = sum_n t^n / n!`` for a degree-2 element (finite sum)."""
    total = ExtElement.zero(t.rank)
    for n in range(t.rank // 2 + 1):
        total = total + divided_power(t, n)
    return total
