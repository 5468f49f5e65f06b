"""Finite p-group machinery over explicit multiplication tables.

Two independent routes to the Zassenhaus filtration live here.  The oracle
route works in the group algebra over F_p: powers of the augmentation ideal,
then membership of g - 1.  The product-formula route multiplies powers of
lower central terms.  Lazard's theorem says they agree, and the test suite
holds both routes to that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GroupAxiomError, InternalError, SchemaError
from .fplinalg import EchelonBasis

ASSOC_EXHAUSTIVE_LIMIT = 256
ASSOC_SAMPLE_FACTOR = 10
_ASSOC_SEED = 0x5EED


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


class GroupTable:
    """Finite p-group given by its full multiplication table, identity at 0."""

    def __init__(self, p: int, table):
        t = np.asarray(table, dtype=np.int64)
        self.p = int(p)
        self.table = t
        self.n = t.shape[0] if t.ndim == 2 else 0
        self._validate()
        self.inverses = np.argmax(t == 0, axis=1)

    # -- construction-time validation --------------------------------------

    def _validate(self):
        t, n = self.table, self.n
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise GroupAxiomError("shape", f"expected a square table, got {t.shape}")
        if t.min() < 0 or t.max() >= n:
            raise GroupAxiomError("closure", "entry out of range")
        if not _is_prime(self.p):
            raise GroupAxiomError("order", f"p = {self.p} is not prime")
        m = n
        while m % self.p == 0:
            m //= self.p
        if m != 1:
            raise GroupAxiomError("order", f"{n} is not a power of {self.p}")
        rng = np.arange(n)
        if not (np.array_equal(t[0], rng) and np.array_equal(t[:, 0], rng)):
            raise GroupAxiomError("identity", "index 0 is not a two-sided identity")
        if not (
            np.array_equal(np.sort(t, axis=1), np.tile(rng, (n, 1)))
            and np.array_equal(np.sort(t, axis=0), np.tile(rng.reshape(n, 1), (1, n)))
        ):
            raise GroupAxiomError("inverses", "a row or column is not a permutation")
        if n <= ASSOC_EXHAUSTIVE_LIMIT:
            left_factors = range(n)
        else:
            # 10 n^2 sampled triples: random left factors, exhaustive (j, k)
            rng_ = np.random.default_rng(_ASSOC_SEED)
            left_factors = rng_.integers(0, n, size=ASSOC_SAMPLE_FACTOR)
        for i in left_factors:
            if not np.array_equal(t[t[i]], t[i][t]):
                raise GroupAxiomError("associativity", f"violated at left factor {i}")

    # -- element arithmetic --------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inverses[i])

    def power(self, i: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(i), -e)
        acc, base = 0, i
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def commutator_of(self, i: int, j: int) -> int:
        return self.mul(self.mul(self.inv(i), self.inv(j)), self.mul(i, j))

    def order_of(self, i: int) -> int:
        order, g = 1, i
        while g != 0:
            g = self.mul(g, i)
            order += 1
        return order

    # -- subgroup machinery (vectorized orbit closures) ----------------------

    def closure(self, seed) -> tuple[int, ...]:
        """Subgroup generated by seed: orbit of 0 under right multiplication."""
        seeds = np.unique(np.array(list(seed), dtype=np.int64).reshape(-1))
        members = np.zeros(self.n, dtype=bool)
        members[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size and seeds.size:
            prods = self.table[np.ix_(frontier, seeds)].ravel()
            fresh = np.unique(prods[~members[prods]])
            members[fresh] = True
            frontier = fresh
        return tuple(int(i) for i in np.nonzero(members)[0])

    def generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        members = {0}
        for g in range(self.n):
            if g not in members:
                gens.append(g)
                members = set(self.closure(gens))
                if len(members) == self.n:
                    break
        return tuple(gens)

    def conjugate_set(self, elements: np.ndarray, g: int) -> np.ndarray:
        return self.table[self.table[self.inv(g), elements], g]

    def normal_closure(self, seed) -> tuple[int, ...]:
        current = self.closure(seed)
        gens = self.generators()
        while True:
            arr = np.array(current, dtype=np.int64)
            member = set(current)
            extra = set()
            for g in gens:
                for c in self.conjugate_set(arr, g):
                    if int(c) not in member:
                        extra.add(int(c))
            if not extra:
                return current
            current = self.closure(list(current) + sorted(extra))

    def is_subgroup(self, elements) -> bool:
        s = set(elements)
        if 0 not in s:
            return False
        arr = np.array(sorted(s), dtype=np.int64)
        prods = self.table[np.ix_(arr, arr)]
        return set(int(x) for x in prods.ravel()) <= s

    def is_normal(self, elements) -> bool:
        s = set(elements)
        arr = np.array(sorted(s), dtype=np.int64)
        return all(
            set(int(x) for x in self.conjugate_set(arr, g)) == s
            for g in self.generators()
        )

    # -- serialization ---------------------------------------------------------

    @classmethod
    def from_dict(cls, data) -> "GroupTable":
        if not isinstance(data, dict):
            raise SchemaError("group file must contain a JSON object")
        for key in ("p", "order", "table"):
            if key not in data:
                raise SchemaError(f"missing key {key!r}")
        p, order, table = data["p"], data["order"], data["table"]
        if not isinstance(p, int) or not isinstance(order, int):
            raise SchemaError("'p' and 'order' must be integers")
        if (
            not isinstance(table, list)
            or len(table) != order
            or any(not isinstance(row, list) or len(row) != order for row in table)
        ):
            raise SchemaError("'table' must be an order x order list of lists")
        if any(not isinstance(x, int) for row in table for x in row):
            raise SchemaError("table entries must be integers")
        return cls(p, table)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "order": self.n,
            "table": [[int(x) for x in row] for row in self.table],
        }

    def __repr__(self):
        return f"GroupTable(p={self.p}, n={self.n})"


@dataclass(frozen=True)
class Subgroup:
    """Sorted element index set, closed under the ambient table operation."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.elements))) != self.elements or not self.elements:
            raise InternalError("subgroup elements must be sorted, unique, non-empty")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in set(self.elements)

    def is_trivial(self) -> bool:
        return self.elements == (0,)


def _subgroup(G: GroupTable, elements, require_normal=True) -> Subgroup:
    sub = Subgroup(tuple(sorted(set(int(e) for e in elements))))
    if not G.is_subgroup(sub.elements):
        raise InternalError("element set is not closed")
    if require_normal and not G.is_normal(sub.elements):
        raise InternalError("expected a normal subgroup")
    return sub


def full_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(tuple(range(G.n)))


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup((0,))


# -- group algebra over F_p ----------------------------------------------------


class AlgebraElement:
    """Element of the group algebra F_p[G] as a coefficient vector."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: GroupTable, coeffs):
        self.group = group
        self.coeffs = np.asarray(coeffs, dtype=np.int64) % group.p

    @classmethod
    def of_element(cls, G: GroupTable, g: int) -> "AlgebraElement":
        v = np.zeros(G.n, dtype=np.int64)
        v[g] = 1
        return cls(G, v)

    def augmentation(self) -> int:
        """The degree map: sum of coefficients in F_p."""
        return int(self.coeffs.sum() % self.group.p)

    def __add__(self, other):
        return AlgebraElement(self.group, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return AlgebraElement(self.group, self.coeffs - other.coeffs)

    def __mul__(self, other):
        G = self.group
        out = np.zeros(G.n, dtype=np.int64)
        for g in np.nonzero(self.coeffs)[0]:
            out[G.table[g]] += int(self.coeffs[g]) * other.coeffs
        return AlgebraElement(G, out)

    def __eq__(self, other):
        return self.group is other.group and np.array_equal(self.coeffs, other.coeffs)


class Subspace:
    """Subspace of F_p^n in canonical reduced row echelon form."""

    def __init__(self, p: int, matrix: np.ndarray):
        self.p = p
        self.matrix = matrix
        self.matrix.setflags(write=False)

    @classmethod
    def from_rows(cls, p, rows, ncols) -> "Subspace":
        basis = EchelonBasis(p, ncols)
        for r in rows:
            basis.insert(r)
        return cls(p, basis.matrix())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.int64) % self.p
        for row in self.matrix:
            piv = int(np.argmax(row != 0))
            c = v[piv]
            if c:
                v = (v - c * row) % self.p
        return not np.any(v)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.matrix.shape == other.matrix.shape
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ncols={self.matrix.shape[1]})"


def augmentation_ideal(G: GroupTable) -> Subspace:
    """Kernel of the degree map: span of g - 1 over the non-identity g."""
    rows = []
    for g in range(1, G.n):
        v = np.zeros(G.n, dtype=np.int64)
        v[g] = 1
        v[0] -= 1
        rows.append(v)
    return Subspace.from_rows(G.p, rows, G.n)


def _ideal_step(G: GroupTable, prev: Subspace) -> Subspace:
    """One multiplication step I^(k) = I^(k-1) * I.

    Right multiplication by a group element only permutes coefficients, and
    the ideal is generated on the right by gen - 1 over group generators, so
    a basis-times-generator sweep spans the full product.
    """
    basis = EchelonBasis(G.p, G.n)
    for gamma in G.generators():
        perm = G.table[:, gamma]
        for row in prev.matrix:
            shifted = np.zeros(G.n, dtype=np.int64)
            shifted[perm] = row
            basis.insert((shifted - row) % G.p)
    return Subspace(G.p, basis.matrix())


def ideal_powers(G: GroupTable) -> list[Subspace]:
    """Descending chain I, I^2, ... down to and including the zero subspace."""
    chain = [augmentation_ideal(G)]
    while chain[-1].dim:
        nxt = _ideal_step(G, chain[-1])
        if nxt.dim >= chain[-1].dim:
            raise InternalError("augmentation ideal chain failed to descend")
        chain.append(nxt)
    return chain


def ideal_power(G: GroupTable, n: int) -> Subspace:
    """Basis of I^n for the augmentation ideal I of F_p[G]."""
    if n < 1:
        raise ValueError("power must be at least 1")
    current = augmentation_ideal(G)
    for _ in range(n - 1):
        if not current.dim:
            break
        current = _ideal_step(G, current)
    return current


def dimension_subgroup_oracle(G: GroupTable, n: int) -> Subgroup:
    """Dimension subgroup from the definition: all g with g - 1 in I^n."""
    space = ideal_power(G, n)
    members = []
    for g in range(G.n):
        v = np.zeros(G.n, dtype=np.int64)
        v[g] = 1
        v[0] -= 1
        if space.contains(v):
            members.append(g)
    return _subgroup(G, members)


# -- lower central series and the Lazard product -------------------------------


def lower_central_series(G: GroupTable) -> list[Subgroup]:
    """gamma_1 = G, gamma_(n+1) = [gamma_n, G], computed to stabilization."""
    gens = G.generators()
    series = [full_subgroup(G)]
    current = series[0]
    while not current.is_trivial():
        arr = np.array(current.elements, dtype=np.int64)
        comms = set()
        for t in gens:
            inv_t = G.inv(t)
            left = G.table[G.inverses[arr], inv_t]
            step = G.table[left, arr]
            prods = G.table[step, t]
            comms.update(int(x) for x in prods)
        nxt = _subgroup(G, G.normal_closure(sorted(comms)))
        if nxt.elements == current.elements:
            raise InternalError("lower central series stalled above the identity")
        series.append(nxt)
        current = nxt
    return series


def power_subgroup(G: GroupTable, H: Subgroup, q: int) -> Subgroup:
    """Subgroup generated by the q-th powers of the elements of H."""
    if q < 1:
        raise ValueError("exponent must be positive")
    acc = np.zeros(len(H.elements), dtype=np.int64)
    base = np.array(H.elements, dtype=np.int64)
    e = q
    while e:
        if e & 1:
            acc = G.table[acc, base]
        base = G.table[base, base]
        e >>= 1
    return _subgroup(G, G.closure(int(x) for x in acc))


def subgroup_join(G: GroupTable, subgroups) -> Subgroup:
    """Smallest subgroup containing all of them (closure of the union)."""
    union = set()
    for H in subgroups:
        union.update(H.elements)
    return _subgroup(G, G.closure(sorted(union or {0})))


def _lazard_pairs(n: int, p: int, depth: int):
    """Non-redundant (i, p^j) with i * p^j >= n: minimal j for each i <= depth."""
    pairs = []
    for i in range(1, min(n, depth) + 1):
        q = 1
        while i * q < n:
            q *= p
        pairs.append((i, q))
    return pairs


def dimension_subgroup_lazard(
    G: GroupTable, n: int, lcs: list[Subgroup] | None = None
) -> Subgroup:
    """Dimension subgroup via the product of powers of lower central terms."""
    if n < 1:
        raise ValueError("index must be at least 1")
    if lcs is None:
        lcs = lower_central_series(G)
    pieces = [
        power_subgroup(G, lcs[i - 1], q) for i, q in _lazard_pairs(n, G.p, len(lcs))
    ]
    return subgroup_join(G, pieces)


def zassenhaus_series_lazard(G: GroupTable) -> list[Subgroup]:
    """G = G_1 >= G_2 >= ... down to and including the trivial subgroup."""
    lcs = lower_central_series(G)
    series = [full_subgroup(G)]
    n = 1
    while not series[-1].is_trivial():
        n += 1
        series.append(dimension_subgroup_lazard(G, n, lcs=lcs))
        if len(series) > 4 * G.n:
            raise InternalError("filtration failed to reach the identity")
    return series


def _log_p(p: int, m: int) -> int:
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise InternalError(f"{m} is not a power of {p}")
    return k


def dimension_factors(G: GroupTable) -> list[int]:
    """log_p of the successive quotients of the Zassenhaus filtration."""
    series = zassenhaus_series_lazard(G)
    return [
        _log_p(G.p, a.order // b.order) for a, b in zip(series, series[1:])
    ]


def dim_g3_mod_g4(G: GroupTable) -> int:
    """log_p |G_3 / G_4|, the quantity separating the (3,3) groups from the
    (3,5) and (3,7) ones among 2-generated finite p-groups."""
    lcs = lower_central_series(G)
    g3 = dimension_subgroup_lazard(G, 3, lcs=lcs)
    g4 = dimension_subgroup_lazard(G, 4, lcs=lcs)
    return _log_p(G.p, g3.order // g4.order)


# -- bundled groups -------------------------------------------------------------


def _table_from_op(elements, op) -> list[list[int]]:
    index = {e: i for i, e in enumerate(elements)}
    return [[index[op(a, b)] for b in elements] for a in elements]


def _cyclic(p: int, k: int) -> GroupTable:
    n = p**k
    return GroupTable(p, [[(i + j) % n for j in range(n)] for i in range(n)])


def _product_cyclic(p: int, k1: int, k2: int) -> GroupTable:
    n1, n2 = p**k1, p**k2
    elements = [(a, b) for a in range(n1) for b in range(n2)]
    return GroupTable(
        p, _table_from_op(elements, lambda u, v: ((u[0] + v[0]) % n1, (u[1] + v[1]) % n2))
    )


def _dihedral8() -> GroupTable:
    # rotations r^i and reflections r^i s, encoded (i, j) with j the flip bit
    elements = [(i, j) for j in range(2) for i in range(4)]

    def op(u, v):
        i1, j1 = u
        i2, j2 = v
        i = (i1 + i2) % 4 if j1 == 0 else (i1 - i2) % 4
        return (i, (j1 + j2) % 2)

    return GroupTable(2, _table_from_op(elements, op))


def _quaternion8() -> GroupTable:
    # a^i b^j with a^4 = 1, b^2 = a^2, b a = a^-1 b
    elements = [(i, j) for j in range(2) for i in range(4)]

    def op(u, v):
        i1, j1 = u
        i2, j2 = v
        i = (i1 + i2) % 4 if j1 == 0 else (i1 - i2) % 4
        if j1 and j2:
            i = (i + 2) % 4
        return (i, (j1 + j2) % 2)

    return GroupTable(2, _table_from_op(elements, op))


def _heisenberg(p: int) -> GroupTable:
    # upper unitriangular 3x3 matrices over F_p, entries (a, b, c)
    elements = [
        (a, b, c) for a in range(p) for b in range(p) for c in range(p)
    ]

    def op(u, v):
        a1, b1, c1 = u
        a2, b2, c2 = v
        return ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p)

    return GroupTable(p, _table_from_op(elements, op))


def _modular27() -> GroupTable:
    # C9 semidirect C3, the exponent-9 extraspecial group of order 27
    elements = [(a, b) for a in range(9) for b in range(3)]

    def op(u, v):
        a1, b1 = u
        a2, b2 = v
        return ((a1 + a2 * pow(4, b1, 9)) % 9, (b1 + b2) % 3)

    return GroupTable(3, _table_from_op(elements, op))


BUILTIN_GROUPS = {
    "C2": lambda: _cyclic(2, 1),
    "C4": lambda: _cyclic(2, 2),
    "C8": lambda: _cyclic(2, 3),
    "C16": lambda: _cyclic(2, 4),
    "C3": lambda: _cyclic(3, 1),
    "C9": lambda: _cyclic(3, 2),
    "C27": lambda: _cyclic(3, 3),
    "C2xC2": lambda: _product_cyclic(2, 1, 1),
    "C3xC3": lambda: _product_cyclic(3, 1, 1),
    "D4": _dihedral8,
    "Q8": _quaternion8,
    "heisenberg_27": lambda: _heisenberg(3),
    "M27": _modular27,
}


def builtin_group(name: str) -> GroupTable:
    try:
        factory = BUILTIN_GROUPS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_GROUPS))
        raise SchemaError(f"unknown builtin group {name!r}; available: {known}") from None
    return factory()
