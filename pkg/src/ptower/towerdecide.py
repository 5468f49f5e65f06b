"""Decision procedure for the length of the p-class field tower.

For an imaginary quadratic field and an odd prime p the class-group p-rank
settles every case except rank 2: rank 0 and 1 give finite towers of length
0 and 1, rank >= 3 gives an infinite tower.  At rank 2 two further tests are
available, one unconditional (vanishing Massey trace coefficients of the two
relations) and two conditional on the (3,3) conjecture (trace-matrix
invertibility, or the parity of dim G3/G4).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gsineq, magnus, quadforms
from .errors import (
    ConjectureNotAssumed,
    EvenPrime,
    InconsistentDimension,
    InternalError,
    PrimeTooSmall,
)

ASSUMPTION_33 = "(3,3) conjecture"

FINITE_LENGTH = "FiniteLength"
INFINITE = "Infinite"
CONJECTURALLY_FINITE = "ConjecturallyFinite"
CONJECTURALLY_INFINITE = "ConjecturallyInfinite"
UNDECIDED = "Undecided"

_STATUSES = {FINITE_LENGTH, INFINITE, CONJECTURALLY_FINITE, CONJECTURALLY_INFINITE, UNDECIDED}

# fields whose tower length is known from the literature; attached as notes
KNOWN_LENGTH_NOTES = {
    (-3299, 3): "Scholz-Taussky (1934): the 3-class field tower of "
    "Q(sqrt(-3299)) has length exactly 2.",
}

_37_NOTE = (
    "known constraint: a 2-generated p-tower group of type (3,7) with p > 7 "
    "would have order at least p^(21+a+b) >= p^23; no such group is known."
)


@dataclass(frozen=True)
class TowerVerdict:
    """Decision output with the rule chain that produced it.

    Conjectural statuses may only be produced under an explicit assumption,
    and rank arguments alone never certify a finite length beyond 1.
    """

    status: str
    length: int | None = None
    justification: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise InternalError(f"unknown status {self.status!r}")
        if self.status == FINITE_LENGTH:
            if self.length not in (0, 1):
                raise InternalError("rank rules only certify lengths 0 and 1")
        elif self.length is not None:
            raise InternalError("length is only meaningful for FiniteLength")
        if (
            self.status in (CONJECTURALLY_FINITE, CONJECTURALLY_INFINITE)
            and ASSUMPTION_33 not in self.assumptions
        ):
            raise InternalError("conjectural verdict without the (3,3) assumption")

    def with_notes(self, notes) -> "TowerVerdict":
        merged = self.notes + tuple(n for n in notes if n not in self.notes)
        return TowerVerdict(self.status, self.length, self.justification, self.assumptions, merged)

    def prepend_justification(self, lines) -> "TowerVerdict":
        return TowerVerdict(
            self.status, self.length, tuple(lines) + self.justification, self.assumptions, self.notes
        )

    def to_dict(self) -> dict:
        out: dict = {"status": self.status}
        if self.status == FINITE_LENGTH:
            out["length"] = self.length
        out["justification"] = list(self.justification)
        out["assumptions"] = list(self.assumptions)
        out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class TowerInput:
    """Field and prime, optionally with relation data for the rank-2 case.

    Relations cannot be derived from the field here; when supplied they are
    user-provided words in the two tower-group generators.  dim_g3_g4 is the
    filtration datum computable from the second tower step.
    """

    D: int
    p: int
    relations: tuple[magnus.Word, magnus.Word] | None = None
    dim_g3_g4: int | None = None
    assume_33: bool = False

    def __post_init__(self):
        if self.relations is not None:
            if len(self.relations) != 2:
                raise InternalError("exactly two relations (r = d = 2)")
            if any(w.d != 2 for w in self.relations):
                raise InternalError("relations must be rank-2 words")


def _require_odd_prime(p: int) -> None:
    if p == 2:
        raise EvenPrime("the decision procedure covers odd primes only")
    if not quadforms.is_prime(p):
        raise ValueError(f"{p} is not prime")


def _verdict_from_rank(rank: int, p: int) -> TowerVerdict:
    base = f"p-rank of the class group at p = {p} is {rank}"
    if rank == 0:
        return TowerVerdict(
            FINITE_LENGTH,
            length=0,
            justification=(base + ": trivial p-class group, the field is its own Hilbert p-class field",),
        )
    if rank == 1:
        return TowerVerdict(
            FINITE_LENGTH,
            length=1,
            justification=(
                base + ": a 1-generated pro-p tower group is cyclic, hence abelian, "
                "so the tower stops after one step",
            ),
        )
    if rank >= 3:
        return TowerVerdict(
            INFINITE,
            justification=(
                base + ": Koch-Venkov rank criterion, r = d with all relation levels >= 3 "
                "violates the Golod-Shafarevich bound r > 4d^3/27 for finite groups",
            ),
        )
    return TowerVerdict(
        UNDECIDED,
        justification=(base + ": rank rules alone cannot decide the rank-2 case",),
    )


def rank_verdict(D: int, p: int) -> TowerVerdict:
    """Tower length from the class-group p-rank alone."""
    _require_odd_prime(p)
    return _verdict_from_rank(quadforms.p_rank(D, p), p)


def massey_vanishing_criterion(rho1: magnus.Word, rho2: magnus.Word, p: int) -> TowerVerdict:
    """Unconditional infiniteness test from the degree-3 relation coefficients.

    When every degree-3 coefficient of both relations vanishes (for p = 3
    including the cube exponents), both relations drop to level >= 4, parity
    pushes them to level >= 5, and two level-5 relations cannot present a
    finite 2-generated group: 2 t^5 - 2 t + 1 is negative at t = 2/3.
    """
    _require_odd_prime(p)
    c1 = magnus.deg3_coefficients(rho1, p)
    c2 = magnus.deg3_coefficients(rho2, p)
    if c1.is_zero() and c2.is_zero():
        return TowerVerdict(
            INFINITE,
            justification=(
                "all degree-3 coefficients (the Massey product traces) vanish for both "
                "relations, forcing levels >= 4, hence >= 5 since even levels are empty; "
                "Golod-Shafarevich then excludes a finite group (2t^5 - 2t + 1 < 0 at t = 2/3)",
            ),
        )
    return TowerVerdict(
        UNDECIDED,
        justification=(
            "some degree-3 coefficient is non-zero, so the Massey vanishing criterion does not apply",
        ),
    )


def conjectural_matrix_decision(
    rho1: magnus.Word, rho2: magnus.Word, p: int, assume_33: bool = False
) -> TowerVerdict:
    """Finiteness test, conditional on the (3,3) conjecture, for p > 3.

    The group is of type (3,3) exactly when the relations span the degree-3
    graded piece, i.e. when the coefficient matrix [[a1,b1],[a2,b2]] is
    invertible; scaling a column by a unit does not change that.
    """
    _require_odd_prime(p)
    if p <= 3:
        raise PrimeTooSmall("the trace-matrix test needs p > 3")
    if not assume_33:
        raise ConjectureNotAssumed("enable assume_33 to use the conjectural matrix test")
    m = magnus.massey_trace_matrix(rho1, rho2, p)
    det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p
    matrix_text = f"degree-3 trace matrix {m}"
    if det:
        return TowerVerdict(
            CONJECTURALLY_FINITE,
            justification=(
                matrix_text + f" is invertible (det = {det} mod {p}): the group is of "
                "type (3,3), conjecturally finite",
            ),
            assumptions=(ASSUMPTION_33,),
        )
    return TowerVerdict(
        CONJECTURALLY_INFINITE,
        justification=(
            matrix_text + " is singular: some relation drops below level 3, the type "
            "is (3,5) or (3,7), conjecturally infinite",
        ),
        assumptions=(ASSUMPTION_33,),
    )


_G4_TABLE = {
    3: {2: CONJECTURALLY_FINITE, 3: CONJECTURALLY_INFINITE},
    "odd>3": {0: CONJECTURALLY_FINITE, 1: CONJECTURALLY_INFINITE},
}


def conjectural_g4_decision(dim_g3_g4: int, p: int, assume_33: bool = False) -> TowerVerdict:
    """Finiteness from dim G3/G4, conditional on the (3,3) conjecture.

    The admissible values are 2 (finite) and 3 (infinite) for p = 3, and
    0 (finite) and 1 (infinite) for p >= 5; anything else is inconsistent
    input rather than a decidable configuration.
    """
    _require_odd_prime(p)
    if not assume_33:
        raise ConjectureNotAssumed("enable assume_33 to use the conjectural G3/G4 test")
    row = _G4_TABLE[3] if p == 3 else _G4_TABLE["odd>3"]
    if dim_g3_g4 not in row:
        raise InconsistentDimension(
            f"dim G3/G4 = {dim_g3_g4} is outside {sorted(row)} for p = {p}"
        )
    status = row[dim_g3_g4]
    kind = "even" if status == CONJECTURALLY_FINITE else "odd"
    verdict = TowerVerdict(
        status,
        justification=(
            f"dim G3/G4 = {dim_g3_g4} ({kind}) matches Zassenhaus type "
            + ("(3,3)" if status == CONJECTURALLY_FINITE else "(3,5) or (3,7)")
            + f" for p = {p}",
        ),
        assumptions=(ASSUMPTION_33,),
    )
    if status == CONJECTURALLY_INFINITE and p > 7:
        verdict = verdict.with_notes((_37_NOTE,))
    return verdict


def decide(inp: TowerInput) -> TowerVerdict:
    """Full pipeline: rank rules, then Massey vanishing, then conjectural tests.

    Every rule consulted leaves a line in the justification chain.  Literature
    facts about specific fields are attached as notes, never as verdicts.
    """
    _require_odd_prime(inp.p)
    rank = quadforms.p_rank(inp.D, inp.p)
    verdict = _verdict_from_rank(rank, inp.p)
    if rank != 2 and (inp.relations is not None or inp.dim_g3_g4 is not None):
        raise InternalError(
            f"relation data presumes r = d = 2, but the p-rank is {rank}"
        )
    if verdict.status == UNDECIDED and inp.relations is not None:
        chain = verdict.justification
        verdict = massey_vanishing_criterion(*inp.relations, inp.p).prepend_justification(chain)
    if verdict.status == UNDECIDED and inp.assume_33:
        chain = verdict.justification
        if inp.relations is not None and inp.p > 3:
            verdict = conjectural_matrix_decision(
                *inp.relations, inp.p, assume_33=True
            ).prepend_justification(chain)
        elif inp.dim_g3_g4 is not None:
            verdict = conjectural_g4_decision(
                inp.dim_g3_g4, inp.p, assume_33=True
            ).prepend_justification(chain)
    note = KNOWN_LENGTH_NOTES.get((inp.D, inp.p))
    if note:
        verdict = verdict.with_notes((note,))
    return verdict


def massey_mechanism_consistent() -> bool:
    """The inequality fact the Massey criterion leans on, checked exactly:
    two relations at level 5 contradict finiteness for d = 2."""
    report = gsineq.gs_contradiction(gsineq.ZassenhausPolynomial(2, {5: 2}))
    return report.has_nonpositive_point
