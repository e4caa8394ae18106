"""Numerical descriptors of projective surfaces.

Each model carries enough data to derive ``(chi, q, p_g)`` and, where the
invariant formulas need it, a divisor-class representation:

* ruled surfaces: the pair ``(<m, F>, m(m-k)/2)`` (:class:`RuledClass`);
* elliptic fibrations: integer vectors on the generators
  ``[F], [F_1], ..., [F_r]`` of a :class:`RelationPresentation`;
* blow-ups: a base class plus one coefficient per exceptional curve;
* minimal surfaces with ``p_g > 0``: the tags ``zero``, ``canonical``, ``other``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .lattice import RelationPresentation, _check_log_data, twist_group


@dataclass(frozen=True)
class SurfaceInvariants:
    chi: int
    q: int
    p_g: int
    canonical_fiber_degree: Optional[int] = None

    def __post_init__(self):
        if self.chi != 1 - self.q + self.p_g:
            raise ValueError(f"inconsistent invariants: chi={self.chi}, q={self.q}, p_g={self.p_g}")
        if self.q < 0 or self.p_g < 0:
            raise ValueError("q and p_g must be nonnegative")


@dataclass(frozen=True)
class Ruled:
    """Ruled surface over a curve of genus ``base_genus``.

    ``hirzebruch_index`` is informational only (g = 0).
    """

    base_genus: int
    hirzebruch_index: Optional[int] = None

    def __post_init__(self):
        if self.base_genus < 0:
            raise ValueError("base genus must be nonnegative")
        if self.hirzebruch_index is not None and self.base_genus != 0:
            raise ValueError("Hirzebruch surfaces are ruled over P^1")


@dataclass(frozen=True)
class Elliptic:
    """Elliptic fibration over a curve of genus ``base_genus``.

    ``presentation`` lives on the generators ``[F], [F_1..F_r]``.  Models
    produced by :func:`build_log_transform` also keep the ``(n, u, v)``
    fiber data in ``log_fibers``.
    """

    base_genus: int
    chi: int
    q: int
    multiplicities: tuple[int, ...]
    presentation: RelationPresentation
    log_fibers: Optional[tuple[tuple[int, int, int], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(self.multiplicities))
        if self.base_genus < 0:
            raise ValueError("base genus must be nonnegative")
        if self.chi < 0:
            raise ValueError("elliptic surfaces have chi(O_V) >= 0")
        if self.q < 0:
            raise ValueError("irregularity must be nonnegative")
        if any(m < 2 for m in self.multiplicities):
            raise ValueError(f"multiple fibers need multiplicity >= 2, got {list(self.multiplicities)}")
        if self.presentation.n_generators != len(self.multiplicities) + 1:
            raise ValueError("presentation must have one generator per multiple fiber plus [F]")
        if self.chi - 1 + self.q < 0:
            raise ValueError(f"chi={self.chi}, q={self.q} give negative p_g")

    @property
    def is_log_transform(self) -> bool:
        return self.log_fibers is not None

    @property
    def canonical_degree(self) -> int:
        """Degree 2g - 2 + chi of the base divisor in the canonical bundle formula."""
        return 2 * self.base_genus - 2 + self.chi


@dataclass(frozen=True)
class BlowUp:
    base: "SurfaceModel"
    exceptional_count: int = 1

    def __post_init__(self):
        if self.exceptional_count < 1:
            raise ValueError("a blow-up needs at least one exceptional curve")


@dataclass(frozen=True)
class MinimalPgPositive:
    kind: str  # "k3", "abelian", "general_type"
    chi: Optional[int] = None
    q: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("k3", "abelian", "general_type"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "general_type":
            if self.chi is None or self.q is None:
                raise ValueError("general type needs chi and q")
            if self.chi < 1 or self.q < 0:
                raise ValueError("general type needs chi >= 1 and q >= 0")
            if self.chi - 1 + self.q < 1:
                raise ValueError(f"chi={self.chi}, q={self.q} give p_g = 0, not a p_g > 0 surface")
        elif self.chi is not None or self.q is not None:
            raise ValueError(f"{self.kind} has fixed invariants")


@dataclass(frozen=True)
class MinimalPgZeroSpecial:
    kind: str  # "enriques", "bielliptic"

    def __post_init__(self):
        if self.kind not in ("enriques", "bielliptic"):
            raise ValueError(f"unknown kind {self.kind!r}")


SurfaceModel = Union[Ruled, Elliptic, BlowUp, MinimalPgPositive, MinimalPgZeroSpecial]


@dataclass(frozen=True)
class RuledClass:
    fiber_pairing: int
    nu: int

    @property
    def m_m_minus_k(self) -> int:
        return 2 * self.nu


@dataclass(frozen=True)
class BlowUpClass:
    base_class: object
    l: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))


MINIMAL_TAGS = ("zero", "canonical", "other")


def invariants(model: SurfaceModel) -> SurfaceInvariants:
    if isinstance(model, Ruled):
        g = model.base_genus
        return SurfaceInvariants(1 - g, g, 0, canonical_fiber_degree=-2)
    if isinstance(model, Elliptic):
        return SurfaceInvariants(model.chi, model.q, model.chi - 1 + model.q, canonical_fiber_degree=0)
    if isinstance(model, BlowUp):
        base = invariants(model.base)
        return SurfaceInvariants(base.chi, base.q, base.p_g, base.canonical_fiber_degree)
    if isinstance(model, MinimalPgPositive):
        if model.kind == "k3":
            return SurfaceInvariants(2, 0, 1)
        if model.kind == "abelian":
            return SurfaceInvariants(0, 2, 1)
        return SurfaceInvariants(model.chi, model.q, model.chi - 1 + model.q)
    if isinstance(model, MinimalPgZeroSpecial):
        if model.kind == "enriques":
            return SurfaceInvariants(1, 0, 0)
        return SurfaceInvariants(0, 1, 0)
    raise TypeError(f"not a surface model: {model!r}")


def canonical_class(model: SurfaceModel):
    if isinstance(model, Elliptic):
        return (model.canonical_degree,) + tuple(m - 1 for m in model.multiplicities)
    if isinstance(model, MinimalPgPositive):
        return "canonical"
    if isinstance(model, BlowUp):
        return BlowUpClass(canonical_class(model.base), (1,) * model.exceptional_count)
    if isinstance(model, Ruled):
        raise ValueError("canonical class of a ruled surface is not fiber-type; use k.F = -2")
    raise ValueError(f"no canonical class representation for {type(model).__name__}")


def minimal_presentation(multiplicities) -> RelationPresentation:
    """Relations ``m_i [F_i] = [F]`` only."""
    r = len(multiplicities)
    rows = []
    for i, m in enumerate(multiplicities):
        row = [0] * (r + 1)
        row[0] = -1
        row[i + 1] = m
        rows.append(tuple(row))
    return RelationPresentation(r + 1, tuple(rows))


def build_elliptic(base_genus: int, chi: int, q: int, multiplicities=(), extra_relations=()) -> Elliptic:
    multiplicities = tuple(multiplicities)
    base = minimal_presentation(multiplicities)
    pres = RelationPresentation(base.n_generators, base.relations + tuple(tuple(r) for r in extra_relations))
    return Elliptic(base_genus, chi, q, multiplicities, pres)


def build_log_transform(fibers) -> Elliptic:
    """Logarithmic transforms of P^1 x E at distinct points.

    ``fibers`` is a sequence of ``(n_i, u_i, v_i)`` with torsion points
    ``zeta_i = (u_i + v_i omega) / n_i``.  Fibers with ``n_i = 1`` are
    rejected since they do not produce multiple fibers.
    """
    fibers = tuple(tuple(int(x) for x in f) for f in fibers)
    if any(len(f) != 3 for f in fibers):
        raise ValueError("each fiber is a triple (n, u, v)")
    n = [f[0] for f in fibers]
    u = [f[1] for f in fibers]
    v = [f[2] for f in fibers]
    _check_log_data(n, u, v)
    if any(x < 2 for x in n):
        raise ValueError(f"log transform multiplicities must be >= 2, got {n}")
    base = minimal_presentation(n)
    rows = base.relations + ((0, *u), (0, *v))
    return Elliptic(0, 0, 1, tuple(n), RelationPresentation(len(n) + 1, rows), log_fibers=fibers)


def fiber_degree(model: Elliptic, c) -> Fraction:
    """Rational multiple of [F] represented by the class ``c`` (torsion ignored)."""
    if len(c) != len(model.multiplicities) + 1:
        raise ValueError(f"class vector has length {len(c)}, expected {len(model.multiplicities) + 1}")
    return Fraction(c[0]) + sum((Fraction(ci, mi) for ci, mi in zip(c[1:], model.multiplicities)), Fraction(0))


def lattice_index(model: Elliptic) -> int:
    """Index of <1, omega> in <1, omega, zeta_1, ..., zeta_r>."""
    if not model.is_log_transform:
        raise ValueError("lattice index needs log-transform data")
    n, u, v = zip(*model.log_fibers) if model.log_fibers else ((), (), ())
    return len(twist_group(n, u, v))


def albanese_fiber_pairing(model: Elliptic, c) -> Fraction:
    """Intersection of ``c`` with a fiber of the Albanese map.

    A regular fiber maps onto the Albanese curve by an isogeny of degree
    equal to the lattice index, so ``<F, E> = index`` and a class that is
    rationally ``lambda [F]`` pairs to ``lambda * index``.
    """
    if not isinstance(model, Elliptic) or not model.is_log_transform:
        raise ValueError("Albanese pairing is only available for log-transform models")
    return fiber_degree(model, c) * lattice_index(model)


# F.F = 0; every fiber-type class is rationally a multiple of [F]
FIBER_SELF_INTERSECTION = 0


def m_m_minus_k(model: Elliptic, m) -> Fraction:
    """m(m-k) for a fiber-type class m."""
    lam = fiber_degree(model, m)
    return lam * (lam - fiber_degree(model, canonical_class(model))) * FIBER_SELF_INTERSECTION
