"""Words in a free pro-p group and their truncated Magnus expansions.

A generator x_i maps to 1 + X_i in the algebra of non-commutative power
series over F_p truncated past degree N.  The Zassenhaus filtration of the
free group is then computable: a word lies in the n-th dimension subgroup
exactly when its expansion minus 1 starts in degree n.  That single fact
drives the level, level-profile and degree-3 coefficient operations here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, InternalError, LevelTooLow, RankUnsupported
from .fplinalg import EchelonBasis, solve_unique

DEFAULT_TRUNCATION = 8


# -- free words ---------------------------------------------------------------


def _free_reduce(letters):
    out = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in generators 1..d with integer exponents."""

    d: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("rank must be positive")
        prev = None
        for gen, exp in self.letters:
            if not 1 <= gen <= self.d:
                raise ValueError(f"generator index {gen} out of range 1..{self.d}")
            if exp == 0 or gen == prev:
                raise ValueError("word is not freely reduced")
            prev = gen

    @classmethod
    def from_letters(cls, d, letters) -> "Word":
        return cls(d, _free_reduce(letters))

    @classmethod
    def identity(cls, d) -> "Word":
        return cls(d, ())

    @classmethod
    def generator(cls, i, d=2) -> "Word":
        return cls(d, ((i, 1),))

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        if self.d != other.d:
            raise ValueError("rank mismatch")
        return Word.from_letters(self.d, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.d, tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        result = Word.identity(self.d)
        for _ in range(n):
            result = result * self
        return result

    def __str__(self):
        def name(i):
            return "xy"[i - 1] if self.d <= 2 else f"x{i}"

        return " ".join(
            name(g) + (f"^{e}" if e != 1 else "") for g, e in self.letters
        )


def commutator(*words: Word) -> Word:
    """Left-normed commutator [w1, w2, ..., wk] = [[w1, w2], ..., wk]."""
    if len(words) < 2:
        raise ValueError("need at least two words")
    acc = words[0]
    for w in words[1:]:
        acc = acc.inverse() * w.inverse() * acc * w
    return acc


# -- truncated non-commutative series -----------------------------------------


def _binom_mod(e: int, k: int, p: int) -> int:
    """Binomial coefficient C(e, k) mod p for any integer e."""
    if e >= 0:
        return math.comb(e, k) % p if k <= e else 0
    return (-1) ** k * math.comb(k - e - 1, k) % p


class TruncatedSeries:
    """Non-commutative polynomial over F_p, monomials of degree <= N.

    Monomials are tuples of generator indices; zero coefficients are never
    stored, so the zero series has an empty term map.
    """

    __slots__ = ("p", "d", "N", "terms")

    def __init__(self, p, d, N, terms=None):
        self.p = p
        self.d = d
        self.N = N
        self.terms = {m: c % p for m, c in (terms or {}).items() if c % p}

    @classmethod
    def one(cls, p, d, N) -> "TruncatedSeries":
        return cls(p, d, N, {(): 1})

    @classmethod
    def generator_power(cls, p, d, N, i, e) -> "TruncatedSeries":
        """Expansion of x_i^e, i.e. (1 + X_i)^e truncated at degree N."""
        terms = {}
        for k in range(N + 1):
            c = _binom_mod(e, k, p)
            if c:
                terms[(i,) * k] = c
        return cls(p, d, N, terms)

    def _check(self, other):
        if (self.p, self.d, self.N) != (other.p, other.d, other.N):
            raise ValueError("series parameters differ")

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = {}
        N = self.N
        for m1, c1 in self.terms.items():
            room = N - len(m1)
            for m2, c2 in other.terms.items():
                if len(m2) <= room:
                    m = m1 + m2
                    out[m] = (out.get(m, 0) + c1 * c2) % self.p
        return TruncatedSeries(self.p, self.d, self.N, out)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = (out.get(m, 0) + c) % self.p
        return TruncatedSeries(self.p, self.d, self.N, out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c: int) -> "TruncatedSeries":
        return TruncatedSeries(
            self.p, self.d, self.N, {m: v * c for m, v in self.terms.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and (self.p, self.d, self.N) == (other.p, other.d, other.N)
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def low_degree(self) -> int | None:
        """Minimal degree of a non-constant term, or None if there is none."""
        degrees = [len(m) for m in self.terms if m]
        return min(degrees) if degrees else None

    def graded_coefficients(self, k: int) -> np.ndarray:
        """Degree-k coefficients as a vector over the d^k monomials (lex order)."""
        vec = np.zeros(self.d**k, dtype=np.int64)
        for idx, mono in enumerate(itertools.product(range(1, self.d + 1), repeat=k)):
            vec[idx] = self.terms.get(mono, 0)
        return vec

    def dense(self, monomials) -> tuple[int, ...]:
        return tuple(self.terms.get(m, 0) for m in monomials)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            mono = "".join("XY"[i - 1] if self.d <= 2 else f"X{i}" for i in m)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def expand(w: Word, p: int, N: int = DEFAULT_TRUNCATION) -> TruncatedSeries:
    """Magnus expansion of w, truncated past degree N."""
    if N < 1:
        raise ValueError("truncation degree must be at least 1")
    series = TruncatedSeries.one(p, w.d, N)
    for gen, exp in w.letters:
        series = series * TruncatedSeries.generator_power(p, w.d, N, gen, exp)
    return series


def level(w: Word, p: int, N: int = DEFAULT_TRUNCATION) -> int | None:
    """Deepest filtration step containing w: the lowest degree of expand(w) - 1.

    None means the word sits below every level visible at this truncation
    (level >= N + 1); the identity word gets that marker by convention.
    """
    return (expand(w, p, N) - TruncatedSeries.one(p, w.d, N)).low_degree()


# -- degree-3 coefficients (the Massey trace data) ----------------------------


@dataclass(frozen=True)
class Deg3Coefficients:
    """Coordinates of a word modulo the 4th filtration step of the rank-2
    free group: a, b on the triple commutators [x,y,x], [x,y,y] and, when
    p = 3 only, e1, e2 on the cube basis vectors x^3, y^3.
    """

    a: int
    b: int
    e1: int = 0
    e2: int = 0

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.e1 or self.e2)


def _deg3_basis_words(p: int) -> list[Word]:
    x, y = Word.generator(1), Word.generator(2)
    basis = []
    if p == 3:
        basis += [x**3, y**3]
    basis += [commutator(x, y, x), commutator(x, y, y)]
    return basis


def deg3_coefficients(w: Word, p: int) -> Deg3Coefficients:
    """Express a level >= 3 word in the degree-3 graded basis of F3/F4."""
    if w.d != 2:
        raise RankUnsupported("degree-3 coefficients need rank 2")
    series = expand(w, p, 3) - TruncatedSeries.one(p, 2, 3)
    low = series.low_degree()
    if low is not None and low < 3:
        raise LevelTooLow(f"word has level {low} < 3")
    basis = _deg3_basis_words(p)
    A = np.stack(
        [(expand(v, p, 3) - TruncatedSeries.one(p, 2, 3)).graded_coefficients(3) for v in basis],
        axis=1,
    )
    sol = solve_unique(A, series.graded_coefficients(3), p)
    if sol is None:
        raise InternalError("degree-3 component escaped the graded basis")
    coeffs = [int(c) for c in sol]
    if p == 3:
        e1, e2, a, b = coeffs
        return Deg3Coefficients(a=a, b=b, e1=e1, e2=e2)
    a, b = coeffs
    return Deg3Coefficients(a=a, b=b)


def massey_trace_matrix(rho1: Word, rho2: Word, p: int) -> list[list[int]]:
    """Matrix [[a1, b1], [a2, b2]] of degree-3 coefficients of two relations.

    These residues realize the traces of the triple Massey products of the
    dual characters; the products themselves are never formed as cochains.
    """
    c1 = deg3_coefficients(rho1, p)
    c2 = deg3_coefficients(rho2, p)
    return [[c1.a, c1.b], [c2.a, c2.b]]


def free_dimension_factor_deg3(p: int, d: int = 2) -> int:
    """Dimension of the degree-3 graded piece of the filtration on the free
    rank-2 group: rank of the leading terms of the weight-3 basic commutators
    together with the p-th power words whose expansion starts in degree 3.
    """
    if d != 2:
        raise RankUnsupported("dimension factor computed for rank 2 only")
    x, y = Word.generator(1), Word.generator(2)
    generators = [commutator(x, y, x), commutator(x, y, y)]
    if p == 3:  # x^(p^j) has leading degree p^j, which hits 3 only at p = 3
        generators += [x**3, y**3]
    basis = EchelonBasis(p, 2**3)
    for w in generators:
        series = expand(w, p, 3) - TruncatedSeries.one(p, 2, 3)
        basis.insert(series.graded_coefficients(3))
    return basis.dim


# -- graded level profile of a relation set -----------------------------------


@dataclass(frozen=True)
class LevelProfile:
    """Counts r_k of relations resolved at each level k, the leftover count
    beyond the truncation, and the truncation itself.  Leading-term reduction
    only, so the result is an approximation of the exact minimal-generation
    profile; consumers should treat it as such.
    """

    counts: dict[int, int]
    beyond: int
    truncation: int
    approximate: bool = True

    def total(self) -> int:
        return sum(self.counts.values()) + self.beyond


def level_profile(relations, p: int, N: int = DEFAULT_TRUNCATION) -> LevelProfile:
    """Greedy graded reduction of a relation list.

    Degree by degree, the leading coefficient vectors of the relations living
    at that level are row-reduced; independent ones are counted there, and
    each dependent one is replaced by its remainder, which lands strictly
    deeper.  Every relation ends up in exactly one bucket.
    """
    relations = list(relations)
    if not relations:
        raise EmptyInput("no relations given")
    d = relations[0].d
    one = TruncatedSeries.one(p, d, N)
    pending = [(i, expand(w, p, N) - one) for i, w in enumerate(relations)]
    counts: dict[int, int] = {}
    for k in range(1, N + 1):
        here = [(i, s) for i, s in pending if s.low_degree() == k]
        pending = [(i, s) for i, s in pending if s.low_degree() != k]
        pivots: list[tuple[int, np.ndarray, TruncatedSeries]] = []
        for i, s in here:
            vec = s.graded_coefficients(k)
            for piv, row, srow in pivots:
                c = int(vec[piv])
                if c:
                    vec = (vec - c * row) % p
                    s = s - srow.scaled(c)
            nz = np.nonzero(vec)[0]
            if nz.size:
                piv = int(nz[0])
                inv = pow(int(vec[piv]), -1, p)
                pivots.append((piv, (vec * inv) % p, s.scaled(inv)))
                counts[k] = counts.get(k, 0) + 1
            else:
                pending.append((i, s))  # remainder starts strictly deeper
    profile = LevelProfile(dict(sorted(counts.items())), len(pending), N)
    if profile.total() != len(relations):
        raise InternalError("level profile lost a relation")
    return profile


def koch_venkov_violations(profile: LevelProfile) -> list[int]:
    """Even levels with relations: impossible for genuine p-tower profiles."""
    return sorted(k for k, r in profile.counts.items() if k % 2 == 0 and r)


# -- finite free quotients (cross-check substrate) ----------------------------


@dataclass(frozen=True)
class FreeQuotient:
    """Finite quotient of the rank-2 free group by a filtration step,
    realized as a multiplication table plus the word-to-element map.
    """

    group: "GroupTable"  # noqa: F821  (imported lazily below)
    p: int
    depth: int
    _index: dict

    def element_of(self, w: Word) -> int:
        series = expand(w, self.p, self.depth - 1)
        key = series.dense(self._monomials())
        try:
            return self._index[key]
        except KeyError:
            raise InternalError("word image escaped the enumerated quotient") from None

    def _monomials(self):
        return _monomials_upto(2, self.depth - 1)


def _monomials_upto(d: int, N: int):
    monos = [()]
    for k in range(1, N + 1):
        monos.extend(itertools.product(range(1, d + 1), repeat=k))
    return monos


def free_quotient_table(p: int, depth: int = 4) -> FreeQuotient:
    """Multiplication table of the rank-2 free group modulo its depth-th
    filtration step, built from truncated expansions of the two generators.

    Order grows like p^7 at depth 4 for p in {2, 3}, p^5 for p >= 5; a guard
    rejects parameter choices that would not fit in memory.
    """
    from .groupcore import GroupTable

    if depth < 2:
        raise ValueError("depth must be at least 2")
    N = depth - 1
    monomials = _monomials_upto(2, N)
    mono_index = {m: i for i, m in enumerate(monomials)}
    nmono = len(monomials)
    concat = [
        [
            mono_index[m1 + m2] if len(m1) + len(m2) <= N else None
            for m2 in monomials
        ]
        for m1 in monomials
    ]
    gens = [
        TruncatedSeries.generator_power(p, 2, N, i, 1).dense(monomials)
        for i in (1, 2)
    ]

    def mul_dense(u, v):
        out = [0] * nmono
        for i, ci in enumerate(u):
            if ci:
                row = concat[i]
                for j, cj in enumerate(v):
                    if cj and row[j] is not None:
                        out[row[j]] = (out[row[j]] + ci * cj) % p
        return tuple(out)

    identity = TruncatedSeries.one(p, 2, N).dense(monomials)
    index = {identity: 0}
    elements = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                prod = mul_dense(u, g)
                if prod not in index:
                    index[prod] = len(elements)
                    elements.append(prod)
                    nxt.append(prod)
        frontier = nxt
    n = len(elements)
    if n > 5000:
        raise ValueError(f"quotient of order {n} is beyond desk scale")

    E = np.array(elements, dtype=np.int64)
    radix = np.array([p**k for k in range(nmono)], dtype=np.int64)
    codes = E @ radix
    order_idx = np.argsort(codes)
    sorted_codes = codes[order_idx]
    pairs = [
        (i, j, k)
        for i in range(nmono)
        for j in range(nmono)
        if (k := concat[i][j]) is not None
    ]
    table = np.empty((n, n), dtype=np.int64)
    for row, u in enumerate(elements):
        prod = np.zeros((n, nmono), dtype=np.int64)
        for i, j, k in pairs:
            if u[i]:
                prod[:, k] += u[i] * E[:, j]
        prod %= p
        where = np.searchsorted(sorted_codes, prod @ radix)
        found = order_idx[where]
        if not np.array_equal(E[found], prod):
            raise InternalError("product fell outside the enumerated quotient")
        table[row] = found
    group = GroupTable(p, table)
    return FreeQuotient(group=group, p=p, depth=depth, _index=index)
