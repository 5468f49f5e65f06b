"""Error taxonomy shared by all ptower modules.

Every domain error derives from PTowerError so the CLI can map failures to
exit code 1 while reporting the concrete error name.
"""


class PTowerError(Exception):
    """Base class for all domain errors raised by this package."""


# -- quadratic forms / class groups ----------------------------------------

class NotNegative(PTowerError):
    """Radicand of an imaginary quadratic field must be negative."""


class NotSquarefree(PTowerError):
    """Radicand must be squarefree."""


class NotPositiveDefinite(PTowerError):
    """Form is not positive definite (needs a > 0 and discriminant < 0)."""


class BadDiscriminant(PTowerError):
    """Discriminant must be negative and congruent to 0 or 1 mod 4."""


class DiscriminantMismatch(PTowerError):
    """Forms being composed must share one discriminant."""


class InternalError(PTowerError):
    """An internal consistency check failed; indicates a bug, not bad input."""


# -- group tables -----------------------------------------------------------

class SchemaError(PTowerError):
    """Group input file does not match the expected JSON schema."""


class GroupAxiomError(PTowerError):
    """Multiplication table violates a group axiom."""

    def __init__(self, axiom, detail=""):
        self.axiom = axiom
        super().__init__(f"{axiom}: {detail}" if detail else axiom)


# -- free-group words and Magnus expansions ---------------------------------

class RankUnsupported(PTowerError):
    """Operation is only defined for rank-2 free groups."""


class LevelTooLow(PTowerError):
    """Relation word sits too high in the filtration for this operation."""


class EmptyInput(PTowerError):
    """A non-empty collection of relations is required."""


# -- tower decision ----------------------------------------------------------

class EvenPrime(PTowerError):
    """The decision procedure covers odd primes only."""


class PrimeTooSmall(PTowerError):
    """The trace-matrix test requires p > 3."""


class ConjectureNotAssumed(PTowerError):
    """A conjectural decision was requested without enabling the assumption."""


class InconsistentDimension(PTowerError):
    """dim G3/G4 value is outside the range the classification allows."""


# -- word grammar ------------------------------------------------------------

class WordSyntaxError(PTowerError):
    """Relation word text does not match the grammar."""

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
