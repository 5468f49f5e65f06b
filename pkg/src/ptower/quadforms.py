"""Class groups of imaginary quadratic fields via binary quadratic forms.

The class group Cl(K) of K = Q(sqrt(m)) is realized as the set of reduced
positive definite forms of the fundamental discriminant under Gauss/Dirichlet
composition.  Everything here is exact integer arithmetic; enumeration and
factoring are plain trial division, which is adequate at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BadDiscriminant,
    DiscriminantMismatch,
    InternalError,
    NotNegative,
    NotPositiveDefinite,
    NotSquarefree,
)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _crt(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Solve x = r1 (mod m1), x = r2 (mod m2); returns (x, lcm)."""
    g, s, _ = _xgcd(m1, m2)
    if (r2 - r1) % g:
        raise InternalError(f"incompatible congruences mod {m1}, {m2}")
    lcm = m1 // g * m2
    x = (r1 + (r2 - r1) // g * s * m1) % lcm
    return x, lcm


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime divisors of n > 0 by trial division."""
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        primes.append(n)
    return tuple(primes)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Imaginary quadratic field Q(sqrt(m)) with fundamental discriminant D."""

    m: int
    D: int


def fundamental_discriminant(m: int) -> FieldSpec:
    """Fundamental discriminant of Q(sqrt(m)) for squarefree m < 0."""
    if m >= 0:
        raise NotNegative(f"radicand must be negative, got {m}")
    n = -m
    if n % 4 == 0:
        raise NotSquarefree(f"{m} is divisible by 4")
    for q in _prime_factors(n):
        if n % (q * q) == 0:
            raise NotSquarefree(f"{m} is divisible by {q}^2")
    D = m if m % 4 == 1 else 4 * m
    return FieldSpec(m=m, D=D)


@dataclass(frozen=True, order=True)
class QuadForm:
    """Positive definite integral binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant() >= 0:
            raise NotPositiveDefinite(f"({self.a},{self.b},{self.c})")

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def inverse(self) -> "QuadForm":
        return QuadForm(self.a, -self.b, self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


def _check_discriminant(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise BadDiscriminant(f"{D} is not a negative discriminant")


def principal_form(D: int) -> QuadForm:
    """Identity class: (1, 0, -D/4) or (1, 1, (1-D)/4) by parity of D."""
    _check_discriminant(D)
    if D % 2 == 0:
        return QuadForm(1, 0, -D // 4)
    return QuadForm(1, 1, (1 - D) // 4)


def reduce(f: QuadForm) -> QuadForm:
    """Unique reduced representative of the class of f (Gauss reduction)."""
    a, b, c = f.a, f.b, f.c
    D = f.discriminant()
    if a <= 0 or D >= 0:
        raise NotPositiveDefinite(f"({a},{b},{c})")
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if abs(b) > a:
            # translate b into (-a, a]
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            c += (r * r - b * b) // (4 * a)
            b = r
            continue
        if (abs(b) == a or a == c) and b < 0:
            b = -b
            continue
        return QuadForm(a, b, c)


def enumerate_reduced_forms(D: int) -> list[QuadForm]:
    """All primitive reduced forms of discriminant D, sorted by (a, b, c).

    Loops b over the parity class of D up to sqrt(|D|/3) and factors
    (b^2 - D)/4 into a*c pairs with |b| <= a <= c by trial division.
    """
    _check_discriminant(D)
    forms = []
    b = D % 2
    bmax = math.isqrt(-D // 3)
    while b <= bmax:
        m4 = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= m4:
            if m4 % a == 0:
                c = m4 // a
                if math.gcd(a, math.gcd(b, c)) == 1:
                    forms.append(QuadForm(a, b, c))
                    if 0 < b < a and a != c:
                        forms.append(QuadForm(a, -b, c))
            a += 1
        b += 2
    forms.sort()
    return forms


def _coprime_representation(f: QuadForm, n: int) -> tuple[int, int]:
    """Proper pair (x, y) with gcd(f(x, y), n) = 1.

    Per prime q | n picks (x, y) mod q hitting a unit value of f, then
    combines by CRT; primitivity of f guarantees a choice at every prime.
    """
    primes = _prime_factors(n) if n > 1 else ()
    if not primes:
        return 1, 0
    x, y, mod = 0, 0, 1
    for q in primes:
        if f.a % q:
            px, py = 1, 0
        elif f.c % q:
            px, py = 0, 1
        else:
            px, py = 1, 1  # f(1,1) = a + b + c = b (mod q), nonzero by primitivity
        x, _ = _crt(x, mod, px, q)
        y, mod = _crt(y, mod, py, q)
    g = math.gcd(x, y)
    if g > 1:
        x, y = x // g, y // g
    if (x, y) == (0, 0):
        raise InternalError("degenerate representation pair")
    return x, y


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Reduced Dirichlet composition of two forms of one discriminant.

    Replaces f2 by an equivalent form whose leading coefficient is coprime
    to f1.a, translates both to a common middle coefficient (the united-forms
    normal form), multiplies leading coefficients, and reduces.
    """
    D = f1.discriminant()
    if f2.discriminant() != D:
        raise DiscriminantMismatch(f"{D} != {f2.discriminant()}")
    a1, b1 = f1.a, f1.b
    x, y = _coprime_representation(f2, a1)
    a2 = f2(x, y)
    # complete (x, y) to a determinant-1 change of variables
    _, s, t = _xgcd(x, y)
    u, v = -t, s  # x*v - y*u = 1
    b2 = 2 * f2.a * x * u + f2.b * (x * v + y * u) + 2 * f2.c * y * v
    B, _ = _crt(b1, 2 * a1, b2, 2 * a2)
    A = a1 * a2
    C = (B * B - D) // (4 * A)
    return reduce(QuadForm(A, B, C))


def form_pow(f: QuadForm, e: int) -> QuadForm:
    """e-th power of the class of f (binary exponentiation), reduced."""
    D = f.discriminant()
    if e < 0:
        return form_pow(f.inverse(), -e)
    result = principal_form(D)
    base = reduce(f)
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


@dataclass(frozen=True)
class AbelianStructure:
    """Elementary divisors d1 | d2 | ... | dt of a finite abelian group."""

    elementary_divisors: tuple[int, ...]
    order: int

    def __post_init__(self):
        prod = 1
        prev = 1
        for d in self.elementary_divisors:
            if d <= 1 or d % prev:
                raise InternalError(f"bad divisor chain {self.elementary_divisors}")
            prev = d
            prod *= d
        if prod != self.order:
            raise InternalError("divisor product does not match group order")


def _invariant_factors(elements, mul, ident) -> list[int]:
    """Invariant factors (largest first) by greedy maximal-order peeling.

    Peels a cyclic factor generated by an element of maximal order, forms the
    quotient on coset representatives, and recurses; brute force throughout.
    """
    h = len(elements)
    if h == 1:
        return []
    orders = {g: _element_order_generic(g, mul, ident, h) for g in elements}
    n1 = max(orders.values())
    g1 = min(g for g in elements if orders[g] == n1)
    if n1 == h:
        return [h]
    # coset partition of <g1>
    cyc = [ident]
    while len(cyc) < n1:
        cyc.append(mul(cyc[-1], g1))
    rep_of = {}
    reps = []
    for g in sorted(elements):
        if g in rep_of:
            continue
        coset = sorted(mul(g, z) for z in cyc)
        rep = coset[0]
        reps.append(rep)
        for member in coset:
            rep_of[member] = rep

    def qmul(r1, r2):
        return rep_of[mul(r1, r2)]

    return [n1] + _invariant_factors(reps, qmul, rep_of[ident])


def _element_order_generic(g, mul, ident, group_order: int) -> int:
    order = group_order
    for q in _prime_factors(group_order):
        while order % q == 0 and _pow_generic(g, order // q, mul, ident) == ident:
            order //= q
    return order


def _pow_generic(g, e, mul, ident):
    result, base = ident, g
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def class_group_structure(D: int) -> AbelianStructure:
    """Elementary divisors of the form class group of discriminant D."""
    forms = enumerate_reduced_forms(D)
    h = len(forms)
    if h == 1:
        return AbelianStructure((), 1)
    factors = _invariant_factors(forms, compose, principal_form(D))
    return AbelianStructure(tuple(reversed(factors)), h)


def p_rank(D: int, p: int) -> int:
    """p-rank of Cl(K): log_p of the number of classes killed by p."""
    _check_discriminant(D)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    ident = principal_form(D)
    count = sum(1 for f in enumerate_reduced_forms(D) if form_pow(f, p) == ident)
    rank = 0
    while count % p == 0:
        count //= p
        rank += 1
    if count != 1:
        raise InternalError(f"p-torsion count is not a power of {p}")
    return rank


def two_rank_genus(D: int) -> int:
    """Genus-theory 2-rank: one less than the number of primes dividing D."""
    _check_discriminant(D)
    return len(_prime_factors(-D)) - 1
