"""Closed-form Poincare invariants and the identities relating them.

All values live in Lambda^* H^1 on ``2q`` generators, homology side (after
capping with the Picard torus).  A Brill-Noether class is
``[W_d] = cap(theta_std^(g-d) / (g-d)!)``, of homological degree ``2d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InvariantViolation
from .exterior import (
    ExtElement,
    cap_fundamental,
    divided_power,
    numeric_degree,
    theta_std,
    truncate,
)
from .lattice import (
    FiberDecomposition,
    enumerate_decompositions,
    fiber_solutions,
    classes_equal,
    twist_group,
)
from .surfaces import (
    BlowUp,
    BlowUpClass,
    Elliptic,
    MinimalPgPositive,
    MinimalPgZeroSpecial,
    Ruled,
    RuledClass,
    albanese_fiber_pairing,
    canonical_class,
    invariants,
    m_m_minus_k as elliptic_m_m_minus_k,
    minimal_presentation,
)


def gen_binom(n: int, d: int) -> int:
    """n(n-1)...(n-d+1)/d! for any integer n; 0 when d < 0."""
    if d < 0:
        return 0
    num, den = 1, 1
    for i in range(d):
        num *= n - i
        den *= i + 1
    return num // den


@dataclass(frozen=True)
class PoincarePair:
    p_plus: ExtElement
    p_minus: ExtElement
    provenance: str
    # the competing branch when two closed forms overlap and disagree
    alternative: Optional["PoincarePair"] = None

    def __post_init__(self):
        if self.p_plus.rank != self.p_minus.rank:
            raise ValueError("P+ and P- must have the same rank")

    @property
    def rank(self) -> int:
        return self.p_plus.rank

    @property
    def disagreement(self) -> bool:
        return self.alternative is not None

    @property
    def numeric_degrees(self) -> tuple[int, int]:
        return numeric_degree(self.p_plus), numeric_degree(self.p_minus)

    def is_zero(self) -> bool:
        return self.p_plus.is_zero() and self.p_minus.is_zero()

    def difference(self) -> ExtElement:
        return self.p_plus - self.p_minus

    def to_json(self) -> dict:
        out = {
            "p_plus": self.p_plus.to_pairs(),
            "p_minus": self.p_minus.to_pairs(),
            "provenance": self.provenance,
            "numeric_degrees": list(self.numeric_degrees),
        }
        if self.alternative is not None:
            out["disagreement"] = True
            out["alternative"] = self.alternative.to_json()
        return out

    @classmethod
    def scalars(cls, q: int, plus: int, minus: int, provenance: str) -> "PoincarePair":
        return cls(ExtElement.scalar(2 * q, plus), ExtElement.scalar(2 * q, minus), provenance)


def brill_noether(g: int, d: int) -> ExtElement:
    """[W_d] on the Jacobian of a genus-g curve, 0 <= d <= g."""
    if not 0 <= d <= g:
        raise ValueError(f"need 0 <= d <= g, got d={d}, g={g}")
    return cap_fundamental(divided_power(theta_std(g), g - d))


def wall_crossing_difference(q: int, nu: int, theta: ExtElement) -> ExtElement:
    """``sum_{j=0}^{min(q, nu)} cap(theta^(q-j) / (q-j)!)``."""
    if q < 0 or nu < 0:
        raise ValueError(f"need q >= 0 and nu >= 0, got q={q}, nu={nu}")
    if theta.rank != 2 * q:
        raise ValueError(f"theta has rank {theta.rank}, expected {2 * q}")
    if not theta.is_homogeneous(2):
        raise ValueError("theta must be homogeneous of degree 2")
    total = ExtElement.zero(2 * q)
    for j in range(min(q, nu) + 1):
        total = total + cap_fundamental(divided_power(theta, q - j))
    return total


def wall_crossing_fibered(q: int, nu: int, c_half: int) -> ExtElement:
    """``sum_{d=0}^{min(q, nu)} c_half^(q-d) [W_d]`` (with 0^0 = 1)."""
    if q < 0 or nu < 0:
        raise ValueError(f"need q >= 0 and nu >= 0, got q={q}, nu={nu}")
    if isinstance(c_half, Fraction):
        if c_half.denominator != 1:
            raise ValueError(f"half pairing {c_half} is not integral")
        c_half = int(c_half)
    total = ExtElement.zero(2 * q)
    for d in range(min(q, nu) + 1):
        total = total + brill_noether(q, d) * (c_half ** (q - d))
    return total


def _ruled_sum(g: int, pairing: int, nu: int) -> ExtElement:
    total = ExtElement.zero(2 * g)
    for d in range(min(g, nu) + 1):
        total = total + brill_noether(g, d) * ((pairing + 1) ** (g - d))
    return total


def poincare_ruled(g: int, m: RuledClass) -> PoincarePair:
    """Invariants of a ruled surface over a genus-g curve.

    For ``<m, F> = -1`` both closed forms apply.  Since F is nef, Hilb^m is
    empty there, so the ``(0, -sum)`` branch is returned and the other one
    is attached as ``alternative`` whenever the two differ.
    """
    if m.nu < 0:
        raise ValueError(f"m(m-k) must be nonnegative, got 2*nu = {2 * m.nu}")
    s = _ruled_sum(g, m.fiber_pairing, m.nu)
    zero = ExtElement.zero(2 * g)
    if m.fiber_pairing > -1:
        return PoincarePair(s, zero, "ruled_theta_sum[m.F>=-1]")
    empty_branch = PoincarePair(zero, -s, "ruled_theta_sum[m.F<=-1]")
    if m.fiber_pairing == -1:
        other = PoincarePair(s, zero, "ruled_theta_sum[m.F>=-1]")
        if other != empty_branch and not s.is_zero():
            return PoincarePair(zero, -s, empty_branch.provenance, alternative=other)
    return empty_branch


def poincare_pg_q_zero(nu: int, hilb_nonempty: bool) -> PoincarePair:
    """p_g = q = 0: (1, 0) if Hilb^m is nonempty, else (0, -1)."""
    if nu < 0:
        raise ValueError(f"m(m-k) must be nonnegative, got 2*nu = {2 * nu}")
    if hilb_nonempty:
        return PoincarePair.scalars(0, 1, 0, "pg_q_zero[Hilb^m nonempty]")
    return PoincarePair.scalars(0, 0, -1, "pg_q_zero[Hilb^m empty]")


def _fiber_sum(model: Elliptic, c) -> int:
    n = model.canonical_degree
    return sum((-1) ** s.d * gen_binom(n, s.d)
               for s in enumerate_decompositions(model.presentation, model.multiplicities, c))


def poincare_elliptic(model: Elliptic, m) -> PoincarePair:
    """Fiber-decomposition sums for a fiber-type class m.

    P- is evaluated directly on decompositions of k - m, not through duality.
    """
    m = tuple(m)
    k = canonical_class(model)
    plus = _fiber_sum(model, m)
    minus = (-1) ** model.chi * _fiber_sum(model, tuple(a - b for a, b in zip(k, m)))
    return PoincarePair.scalars(model.q, plus, minus, "elliptic_fiber_sum")


def blowup_bound(m_m_minus_k: int, l: int) -> int:
    return m_m_minus_k - l * (l - 1)


def blowup_transform(p: PoincarePair, m_m_minus_k: int, l: int) -> PoincarePair:
    """Invariants of ``sigma^* m + l e`` on the blow-up: truncate at m(m-k) - 2 binom(l, 2)."""
    n = blowup_bound(m_m_minus_k, l)
    alt = None
    if p.alternative is not None:
        alt = blowup_transform(p.alternative, m_m_minus_k, l)
        if alt.p_plus == truncate(p.p_plus, n) and alt.p_minus == truncate(p.p_minus, n):
            alt = None
    return PoincarePair(truncate(p.p_plus, n), truncate(p.p_minus, n),
                        p.provenance + f"|blowup[l={l}]", alt)


def duality_check(pair_m: PoincarePair, pair_km: PoincarePair, chi: int) -> bool:
    """Check [P-(m)]^{2i} == (-1)^(chi+i) [P+(k-m)]^{2i} for every i."""
    if pair_m.rank != pair_km.rank:
        raise ValueError(f"rank mismatch: {pair_m.rank} vs {pair_km.rank}")
    for i in range(pair_m.rank // 2 + 1):
        lhs = pair_m.p_minus.component(2 * i)
        rhs = pair_km.p_plus.component(2 * i) * (-1 if (chi + i) % 2 else 1)
        if lhs != rhs:
            return False
    return True


def grr_character(chi: int, m_m_minus_k: int, theta: ExtElement) -> ExtElement:
    """``chi + m(m-k)/2 - theta`` (cohomology side)."""
    if m_m_minus_k % 2:
        raise ValueError(f"m(m-k) must be even, got {m_m_minus_k}")
    if not theta.is_homogeneous(2):
        raise ValueError("theta must be homogeneous of degree 2")
    return ExtElement.scalar(theta.rank, chi + m_m_minus_k // 2) - theta


def modified_segre(virtual_rank: int, total_chern_of_negative: ExtElement, q: int) -> ExtElement:
    """``sum_{j=0}^{min(q, q-1+rk)} c_{q-j}([F-E]) cap [Pic]``."""
    c = total_chern_of_negative
    if c.rank != 2 * q:
        raise ValueError(f"Chern class has rank {c.rank}, expected {2 * q}")
    if numeric_degree(c) != 1:
        raise ValueError("total Chern class must have unit scalar part")
    odd = sorted(d for d in c.degrees() if d % 2)
    if odd:
        raise ValueError(f"total Chern class has odd-degree components {odd}")
    total = ExtElement.zero(2 * q)
    for j in range(min(q, q - 1 + virtual_rank) + 1):
        total = total + cap_fundamental(c.component(2 * (q - j)))
    return total


def nagata_bound(g: int) -> int:
    """A geometrically ruled surface over a genus-g curve has a section with s^2 <= g.

    Runs the witness computation: a class with <m, F> = 1 and
    0 <= m(m-k)/2 <= 1 has nonvanishing P+.
    """
    if g < 0:
        raise ValueError("genus must be nonnegative")
    for nu in (0, 1):
        if poincare_ruled(g, RuledClass(1, nu)).p_plus.is_zero():
            raise InvariantViolation(f"Nagata witness vanished for g={g}, nu={nu}")
    return g


def lange_count(g: int) -> int:
    """Length of the scheme of minimal sections: numeric degree of P+(m) at <m,F>=1, nu=g."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return numeric_degree(poincare_ruled(g, RuledClass(1, g)).p_plus)


# -- minimal surfaces with p_g > 0 ------------------------------------------


@dataclass(frozen=True)
class BasicClassReport:
    classes: list
    simple_type: bool

    def __post_init__(self):
        for cls, pair in self.classes:
            if pair.is_zero():
                raise InvariantViolation(f"class {cls!r} listed as basic but has zero invariant")


def poincare_minimal(model: MinimalPgPositive, tag: str) -> PoincarePair:
    inv = invariants(model)
    if tag not in ("zero", "canonical", "other"):
        raise ValueError(f"unknown class tag {tag!r}")
    if tag == "other":
        return PoincarePair.scalars(inv.q, 0, 0, "not_a_basic_class")
    if model.kind in ("k3", "abelian"):
        # k = 0: the only basic class, Hilb^0 = Hilb^k is a reduced point
        return PoincarePair.scalars(inv.q, 1, 1, "trivial_canonical_point")
    sign = (-1) ** inv.chi
    flag = "[assertion-dependent]" if inv.q > 0 else ""
    if tag == "zero":
        return PoincarePair(ExtElement.scalar(2 * inv.q, 1), ExtElement.scalar(2 * inv.q, 1),
                            "general_type_rule:P+(0)=1;P-(0)=(-1)^chi*P+(k)" + flag)
    return PoincarePair(ExtElement.scalar(2 * inv.q, sign), ExtElement.scalar(2 * inv.q, sign),
                        "general_type_rule:P-(k)=(-1)^chi;P+(k)=deg[[Hilb^k]]" + flag)


def basic_classes(model) -> BasicClassReport:
    inv = invariants(model)
    if inv.p_g == 0:
        raise ValueError("surface has p_g = 0: infinite basic class set, not of simple type")
    if isinstance(model, MinimalPgPositive):
        tags = ["zero"] if model.kind in ("k3", "abelian") else ["zero", "canonical"]
        return BasicClassReport([(t, poincare_minimal(model, t)) for t in tags], simple_type=True)
    if isinstance(model, Elliptic):
        return _elliptic_basic_classes(model)
    raise ValueError(f"basic classes are not available for {type(model).__name__}")


def _elliptic_basic_classes(model: Elliptic) -> BasicClassReport:
    import itertools

    P = model.presentation
    found: list = []
    for d in range(max(model.canonical_degree, 0) + 1):
        for a in itertools.product(*(range(m) for m in model.multiplicities)):
            c = (d,) + a
            if any(classes_equal(P, c, prev) for prev, _ in found):
                continue
            pair = poincare_elliptic(model, c)
            if not pair.is_zero():
                found.append((c, pair))
    simple = all(elliptic_m_m_minus_k(model, c) == 0 for c, _ in found)
    return BasicClassReport(found, simple_type=simple)


# -- Hilbert scheme components for logarithmic transforms --------------------


@dataclass(frozen=True)
class ComponentDescriptor:
    """One linear system ``|O(dF + sum a_i F_i) (x) L|``.

    ``twist`` is the a-vector of the torsion bundle
    ``L = O(sum t_i F_i - (sum t_i/n_i) F)``; ``d`` may be negative for an
    empty system, in which case ``dimension`` is -1.
    """

    twist: tuple[int, ...]
    d: int
    a: tuple[int, ...]
    dimension: int
    empty: bool

    def to_json(self) -> dict:
        return {"twist": list(self.twist), "d": self.d, "a": list(self.a),
                "dimension": self.dimension, "empty": self.empty}


def _linear_normal_form(pres, mults, x) -> FiberDecomposition:
    sols = fiber_solutions(pres, mults, x)
    if len(sols) != 1:
        raise InvariantViolation(f"expected a unique fibral normal form for {x}, got {sols}")
    return sols[0]


def twist_bundles(model: Elliptic) -> list[tuple[int, ...]]:
    """Torsion line bundles generated by O(sum u_i F_i) and O(sum v_i F_i), as normal forms."""
    if not model.is_log_transform:
        raise ValueError("twist data is only available for log-transform models")
    mults = model.multiplicities
    pic = minimal_presentation(mults)
    r = len(mults)
    gens = [(0,) + tuple(f[1] for f in model.log_fibers), (0,) + tuple(f[2] for f in model.log_fibers)]
    zero = (0,) * (r + 1)
    seen = {_linear_normal_form(pic, mults, zero).vector()}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _linear_normal_form(pic, mults, tuple(a + b for a, b in zip(x, g))).vector()
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    n, u, v = zip(*model.log_fibers)
    expected = len(twist_group(n, u, v))
    if len(seen) != expected:
        raise InvariantViolation(f"twist bundles form a group of order {len(seen)}, lattice index is {expected}")
    return sorted(seen, key=lambda vec: vec[1:])


def hilbert_components(model: Elliptic, m) -> list[ComponentDescriptor]:
    """Decompose Hilb^m into the twisted linear systems, one per torsion bundle."""
    m = tuple(m)
    mults = model.multiplicities
    if len(m) != len(mults) + 1:
        raise ValueError(f"class vector has length {len(m)}, expected {len(mults) + 1}")
    pic = minimal_presentation(mults)
    out = []
    for twist in twist_bundles(model):
        nf = _linear_normal_form(pic, mults, tuple(a + b for a, b in zip(m, twist)))
        empty = nf.d < 0
        out.append(ComponentDescriptor(twist[1:], nf.d, nf.a, -1 if empty else nf.d, empty))
    return out


# -- dispatch used by the batch front end -------------------------------------


def class_m_m_minus_k(model, cls) -> int:
    if isinstance(model, Ruled):
        return cls.m_m_minus_k
    if isinstance(model, Elliptic):
        value = elliptic_m_m_minus_k(model, cls)
        return int(value)
    if isinstance(model, BlowUp):
        total = class_m_m_minus_k(model.base, cls.base_class)
        for l in cls.l:
            total = blowup_bound(total, l)
        return total
    if isinstance(model, MinimalPgPositive):
        return 0
    if isinstance(model, MinimalPgZeroSpecial):
        return 2 * cls["nu"]
    raise TypeError(f"not a surface model: {model!r}")


def poincare(model, cls) -> PoincarePair:
    """Evaluate (P+, P-) for any supported model/class combination."""
    if isinstance(model, Ruled):
        return poincare_ruled(model.base_genus, cls)
    if isinstance(model, Elliptic):
        return poincare_elliptic(model, cls)
    if isinstance(model, MinimalPgPositive):
        return poincare_minimal(model, cls)
    if isinstance(model, MinimalPgZeroSpecial):
        if model.kind != "enriques":
            raise ValueError("bielliptic surfaces have q = 1; no closed form without divisor data")
        return poincare_pg_q_zero(cls["nu"], cls["hilb_nonempty"])
    if isinstance(model, BlowUp):
        if len(cls.l) != model.exceptional_count:
            raise ValueError(f"expected {model.exceptional_count} exceptional coefficients, got {len(cls.l)}")
        pair = poincare(model.base, cls.base_class)
        mmk = class_m_m_minus_k(model.base, cls.base_class)
        for l in cls.l:
            pair = blowup_transform(pair, mmk, l)
            mmk = blowup_bound(mmk, l)
        return pair
    raise TypeError(f"not a surface model: {model!r}")


@dataclass
class WallCheck:
    direct: ExtElement
    fibered: ExtElement
    theta: ExtElement
    q: int
    nu: int
    c_half: int
    pairing_data: dict = field(default_factory=dict)

    @property
    def agreement(self) -> bool:
        return self.direct == self.fibered == self.theta

    def to_json(self) -> dict:
        return {
            "direct": self.direct.to_pairs(),
            "wall_crossing_fibered": self.fibered.to_pairs(),
            "wall_crossing_theta": self.theta.to_pairs(),
            "numeric_degrees": [numeric_degree(self.direct), numeric_degree(self.fibered),
                                numeric_degree(self.theta)],
            "q": self.q,
            "nu": self.nu,
            "c_half": self.c_half,
            "pairing_data": self.pairing_data,
            "agreement": self.agreement,
            "provenance": "wall_crossing_sum|fibered_wall_crossing",
        }


def _half_pairing(model, cls) -> tuple[int, dict]:
    """<2m - k, F_alb>/2 with the data used to get it."""
    if isinstance(model, Ruled):
        return cls.fiber_pairing + 1, {"k.F": -2, "m.F": cls.fiber_pairing}
    if isinstance(model, BlowUp):
        return _half_pairing(model.base, cls.base_class)
    if isinstance(model, Elliptic):
        k = canonical_class(model)
        index = albanese_fiber_pairing(model, (1,) + (0,) * len(model.multiplicities))
        two_m_minus_k = tuple(2 * a - b for a, b in zip(cls, k))
        half = albanese_fiber_pairing(model, two_m_minus_k) / 2
        if half.denominator != 1:
            raise InvariantViolation(f"half pairing {half} is not integral")
        lam_k = albanese_fiber_pairing(model, k) / index
        return int(half), {"E.F": _frac_json(index), "K/F": _frac_json(lam_k)}
    if isinstance(model, MinimalPgZeroSpecial):
        return 0, {}
    raise ValueError(f"no fibration data for {type(model).__name__}")


def _frac_json(x: Fraction):
    return [x.numerator, x.denominator]


def wallcheck(model, cls) -> WallCheck:
    """Recompute P+ - P- from the closed forms and from the wall-crossing sums."""
    inv = invariants(model)
    if inv.p_g != 0:
        raise ValueError("wall crossing applies to p_g = 0 surfaces only")
    if isinstance(model, Elliptic) and not model.is_log_transform:
        raise ValueError("wall check for elliptic models needs log-transform (Albanese) data")
    if isinstance(model, MinimalPgZeroSpecial) and model.kind != "enriques":
        raise ValueError("wall check needs Hilbert-scheme data unavailable for bielliptic surfaces")
    pair = poincare(model, cls)
    direct = pair.difference()
    mmk = class_m_m_minus_k(model, cls)
    c_half, data = _half_pairing(model, cls)
    q = inv.q
    if mmk < 0:
        zero = ExtElement.zero(2 * q)
        return WallCheck(direct, zero, zero, q, mmk // 2, c_half, data)
    nu = mmk // 2
    fibered = wall_crossing_fibered(q, nu, c_half)
    theta = wall_crossing_difference(q, nu, theta_std(q) * c_half)
    return WallCheck(direct, fibered, theta, q, nu, c_half, data)
