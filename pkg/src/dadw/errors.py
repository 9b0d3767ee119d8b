"""Exception types shared across the library.

The CLI maps these onto exit codes: InputError (and its subclasses) means
malformed or out-of-contract input, NoMarkerFound and Inconclusive mean a
search or oracle budget ran out before a definitive answer, and the
witness-carrying exceptions report a genuine structural obstruction.
"""
from __future__ import annotations


class InputError(ValueError):
    """Malformed specification data or an operand outside its contract."""


class ResolutionError(InputError):
    """A point prefix is too short to decide membership in a clopen set."""


class NoMarkerFound(Exception):
    """Marker search exhausted its budget without finding a marker."""

    def __init__(self, budget: int, message: str = ""):
        self.budget = budget
        super().__init__(message or f"no marker found within budget {budget}")


class PeriodicObstruction(Exception):
    """The action has a finite orbit, so no marker can exist.

    Carries a witness: a group element and a description of the fixed
    finite structure it stabilises.
    """

    def __init__(self, witness, message: str = ""):
        self.witness = witness
        super().__init__(message or f"periodic obstruction: {witness}")


class CannotSeparate(Exception):
    """A point could not be separated from a translate of itself."""

    def __init__(self, offender, message: str = ""):
        self.offender = offender
        super().__init__(message or f"cannot separate point from translate by {offender}")


class CapExceeded(Exception):
    """The transition-set fixpoint produced an element beyond its cap."""

    def __init__(self, element, cap: int, message: str = ""):
        self.element = element
        self.cap = cap
        super().__init__(
            message or f"transition set escaped its cap {cap} at {element}"
        )


class FixedPointFound(Exception):
    """Freeness certification found a point fixed by a nontrivial element."""

    def __init__(self, gamma, witness, message: str = ""):
        self.gamma = gamma
        self.witness = witness
        super().__init__(message or f"fixed point for {gamma}: {witness}")


class Inconclusive(Exception):
    """An oracle budget was exhausted before the answer became definitive."""

    def __init__(self, detail: str = ""):
        self.detail = detail
        super().__init__(detail or "inconclusive within the configured budget")
