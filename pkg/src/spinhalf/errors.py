"""Exception types shared across the package.

Each error carries a short machine-readable ``code`` that is surfaced in
CLI and HTTP error envelopes; the code strings are part of the public
JSON contract and must stay stable.
"""

from __future__ import annotations


class SpinHalfError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "Error"

    def __init__(self, message: str, *, position: int | None = None):
        super().__init__(message)
        self.message = message
        self.position = position


class NotNormalizedError(SpinHalfError):
    """An operation required a unit-norm state and got something else."""

    code = "NotNormalized"


class NonHermitianObservableError(SpinHalfError):
    """An expectation value was requested for a non-hermitian operator."""

    code = "NonHermitianObservable"


class ZeroVectorError(SpinHalfError):
    """The zero vector cannot be normalized."""

    code = "ZeroVector"


class ConstraintInfeasibleError(SpinHalfError):
    """No phase assignment can satisfy the requested constraint."""

    code = "ConstraintInfeasible"


class UnresolvedSlotError(SpinHalfError):
    """A free phase slot was left without an assignment."""

    code = "UnresolvedSlot"


class NoRightHandedCandidateError(SpinHalfError):
    """Neither candidate pair satisfied the right-handed commutator test."""

    code = "NoRightHandedCandidate"


class EmptyChainError(SpinHalfError):
    """An analyzer chain needs at least one stage."""

    code = "EmptyChain"


class ExpressionSyntaxError(SpinHalfError):
    """Malformed operator-expression text; ``position`` is the char offset."""

    code = "SyntaxError"


class UnknownSymbolError(SpinHalfError):
    """Operator-expression text used an identifier outside the grammar."""

    code = "UnknownSymbol"


class DegreeOverflowError(SpinHalfError):
    """An expression exceeded the supported total degree."""

    code = "DegreeOverflow"


class UsageError(SpinHalfError):
    """Bad request shape: unknown command, malformed literal, bad flag."""

    code = "UsageError"
