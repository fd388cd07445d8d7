"""Exception hierarchy for numerical q-calculus failures.

Every error carries a short ``category`` string so that harnesses can
record failures per sample without string matching on messages.
"""

from __future__ import annotations


class QError(ArithmeticError):
    category = "numeric"


class PoleError(QError):
    """Argument lies within ``pole_guard`` of a pole."""

    category = "pole"

    def __init__(self, message: str, k: int | None = None, factor: str | None = None):
        super().__init__(message)
        self.k = k
        self.factor = factor


class DivergenceError(QError):
    """A series or lattice sum does not converge.

    ``tail`` is ``"zero"`` (lattice points q**n, n -> +inf), ``"infinity"``
    (n -> -inf), or ``None`` for ordinary power series.
    """

    category = "divergence"

    def __init__(self, message: str, tail: str | None = None):
        super().__init__(message)
        self.tail = tail


class ConvergenceError(QError):
    """The ``max_terms`` cap was reached before the stopping rule fired."""

    category = "non-convergence"


class QOverflowError(QError):
    category = "overflow"


class BranchError(QError):
    category = "branch"


class HypothesisError(QError):
    """Coefficient metadata is incompatible with the requested closed form."""

    category = "hypothesis"


class EstimationError(QError):
    category = "estimation"
