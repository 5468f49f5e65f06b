"""Exact Golod-Shafarevich toolkit.

A group with d generators and r_k relations at filtration level k can only be
finite when Z(t) = sum r_k t^k - d t + 1 stays positive on the open unit
interval.  This module decides that sign condition exactly: integer
coefficient polynomials, Sturm-sequence root counting over the rationals, and
rational witnesses.  Floating point is deliberately absent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import RankUnsupported

# -- dense rational polynomials, index = degree ------------------------------


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_eval(c, t: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * t + coeff
    return acc


def _poly_deriv(c):
    return [k * c[k] for k in range(1, len(c))]


def _poly_rem(num, den):
    """Remainder of polynomial division over Q."""
    num = list(num)
    lead = den[-1]
    while len(num) >= len(den):
        factor = num[-1] / lead
        shift = len(num) - len(den)
        for i, coeff in enumerate(den):
            num[shift + i] -= factor * coeff
        num.pop()
        _poly_trim(num)
    return num


def _poly_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_rem(a, b)
    if a:
        lead = a[-1]
        a = [coeff / lead for coeff in a]
    return a


def _poly_div(num, den):
    """Exact quotient num / den (remainder must vanish)."""
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    while len(num) >= len(den):
        factor = num[-1] / lead
        shift = len(num) - len(den)
        out[shift] = factor
        for i, coeff in enumerate(den):
            num[shift + i] -= factor * coeff
        num.pop()
        _poly_trim(num)
    if num:
        raise ValueError("division is not exact")
    return out


def _squarefree_part(c):
    g = _poly_gcd(c, _poly_deriv(c))
    if len(g) <= 1:
        return list(c)
    return _poly_div(c, g)


def _sturm_chain(c):
    chain = [list(c), _poly_deriv(c)]
    while chain[-1]:
        nxt = [-x for x in _poly_rem(chain[-2], chain[-1])]
        if not nxt:
            break
        chain.append(nxt)
    return chain


def _sign_variations(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


def _count_roots_open_unit_interval(coeffs: list[Fraction]) -> int:
    """Number of distinct real roots in (0, 1) of a polynomial with f(0) != 0."""
    f = _poly_trim(list(coeffs))
    if len(f) <= 1:
        return 0
    one = Fraction(1)
    while _poly_eval(f, one) == 0:
        f = _poly_div(f, [-one, one])  # strip roots at t = 1 (excluded endpoint)
        if len(f) <= 1:
            return 0
    f = _squarefree_part(f)
    chain = _sturm_chain(f)
    v0 = _sign_variations([_poly_eval(g, Fraction(0)) for g in chain])
    v1 = _sign_variations([_poly_eval(g, one) for g in chain])
    return v0 - v1


# -- Zassenhaus polynomials ---------------------------------------------------


class ZassenhausPolynomial:
    """Z(t) = sum_k r_k t^k - d t + 1 for relation counts r_k at level k >= 2."""

    def __init__(self, d: int, levels):
        if d < 0:
            raise ValueError("generator rank must be non-negative")
        clean = {}
        for k, r in dict(levels).items():
            k, r = int(k), int(r)
            if k < 2:
                raise ValueError(f"level {k} < 2: minimal presentations have no level-1 relations")
            if r < 0:
                raise ValueError(f"negative relation count at level {k}")
            if r:
                clean[k] = r
        self.d = d
        self.levels = dict(sorted(clean.items()))

    def coefficients(self) -> list[int]:
        deg = max(self.levels, default=1)
        c = [0] * (deg + 1)
        c[0] = 1
        c[1] = -self.d
        for k, r in self.levels.items():
            c[k] += r
        return c

    def __eq__(self, other):
        return (
            isinstance(other, ZassenhausPolynomial)
            and self.d == other.d
            and self.levels == other.levels
        )

    def __repr__(self):
        return f"ZassenhausPolynomial(d={self.d}, levels={self.levels})"


def evaluate(Z: ZassenhausPolynomial, t) -> Fraction:
    """Exact value of Z at a rational point."""
    return _poly_eval([Fraction(c) for c in Z.coefficients()], Fraction(t))


@dataclass(frozen=True)
class RootReport:
    """Outcome of the sign test on (0, 1); a witness certifies Z <= 0."""

    has_nonpositive_point: bool
    witness: Fraction | None
    root_count: int


def _find_witness(Z: ZassenhausPolynomial) -> Fraction | None:
    """First dyadic point t = odd/2^k, k <= 16, with Z(t) <= 0.

    Falls back on rational root candidates 1/q from the rational root theorem,
    which covers polynomials that only touch zero at a rational point.
    """
    coeffs = [Fraction(c) for c in Z.coefficients()]
    for k in range(1, 17):
        q = 1 << k
        for num in range(1, q, 2):
            t = Fraction(num, q)
            if _poly_eval(coeffs, t) <= 0:
                return t
    lead = abs(Z.coefficients()[-1])
    for q in range(2, lead + 1):
        if lead % q == 0:
            t = Fraction(1, q)
            if _poly_eval(coeffs, t) <= 0:
                return t
    return None


def gs_contradiction(Z: ZassenhausPolynomial) -> RootReport:
    """Decide exactly whether Z dips to <= 0 somewhere on (0, 1).

    Since Z(0) = 1 > 0, a non-positive interior point exists iff Z has a root
    in the open interval; Sturm counting settles that without rounding.  A
    True outcome certifies that no finite group fits these relation levels.
    """
    coeffs = [Fraction(c) for c in Z.coefficients()]
    count = _count_roots_open_unit_interval(coeffs)
    if count == 0:
        return RootReport(False, None, 0)
    return RootReport(True, _find_witness(Z), count)


def medium_bound(d: int, m: int) -> Fraction:
    """Relation-count threshold d^m (m-1)^(m-1) / m^m for levels >= m."""
    if d < 1 or m < 2:
        raise ValueError("need d >= 1 and m >= 2")
    return Fraction(d**m * (m - 1) ** (m - 1), m**m)


def medium_contradiction(d: int, r: int, m: int) -> bool:
    """True when r relations at level >= m cannot present a finite group."""
    if r < 0:
        raise ValueError("negative relation count")
    return Fraction(r) <= medium_bound(d, m)


@dataclass(frozen=True, order=True)
class ZassenhausType:
    """Ordered pair of the two relation levels of a 2-generated group."""

    i: int
    j: int

    def __post_init__(self):
        if self.i > self.j:
            raise ValueError("type pair must be ordered")


@dataclass(frozen=True)
class AdmissibleTypes:
    """Enumeration result plus whether levels beyond the cap were ruled out."""

    types: tuple[ZassenhausType, ...]
    max_level: int
    beyond_excluded: bool


def _pair_poly(i: int, j: int) -> ZassenhausPolynomial:
    levels = {i: 2} if i == j else {i: 1, j: 1}
    return ZassenhausPolynomial(2, levels)


def admissible_types(max_level: int, d: int = 2) -> AdmissibleTypes:
    """All odd level pairs (i, j), 3 <= i <= j <= max_level, that survive
    the sign test.  Levels are odd and >= 3 because minimal presentations
    have no level-1 relations and tower relations skip the even levels.

    Pairs with j > max_level are certified excluded by monotonicity when
    every probe polynomial at level max_level + 2 already fails.
    """
    if d != 2:
        raise RankUnsupported("type enumeration is specific to d = r = 2")
    if max_level < 3:
        raise ValueError("max_level must be at least 3")
    found = []
    for i in range(3, max_level + 1, 2):
        for j in range(i, max_level + 1, 2):
            if not gs_contradiction(_pair_poly(i, j)).has_nonpositive_point:
                found.append(ZassenhausType(i, j))
    probe = max_level + 2 if max_level % 2 else max_level + 1
    beyond = gs_contradiction(_pair_poly(probe, probe)).has_nonpositive_point and all(
        gs_contradiction(_pair_poly(i, probe)).has_nonpositive_point
        for i in range(3, max_level + 1, 2)
    )
    return AdmissibleTypes(tuple(found), max_level, beyond)
