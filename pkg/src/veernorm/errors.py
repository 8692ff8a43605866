"""Typed failure modes.

Every error that a caller is expected to catch gets its own class; anything
else surfacing from this package is a bug.  InternalInconsistency marks a
cross-check failing, i.e. two independent computations of the same thing
disagreeing, and should never escape on valid input.
"""


class VeernormError(Exception):
    pass


class ParseError(VeernormError):
    """Malformed input record."""


class ValidationError(VeernormError):
    """Taut-structure axioms fail; `axiom` names the violated one."""

    def __init__(self, message, axiom=None):
        super().__init__(message)
        self.axiom = axiom


class NotPseudohyperbolic(VeernormError):
    """Boundary track does not split into alternating ladders."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InconsistentVeer(VeernormError):
    """The two ends of an edge computed different handedness."""


class NotStronglyConnected(VeernormError):
    """Dual graph fails strong connectivity; the input is not a connected
    triangulation with matched in/out valences."""


class InternalInconsistency(VeernormError):
    """Two independent routes to one value disagreed."""


class ProngsTooSmall(VeernormError):
    def __init__(self, cusp, prongs):
        super().__init__(f"filling slope on cusp {cusp} has {prongs} prongs, need >= 3")
        self.cusp = cusp
        self.prongs = prongs


class UnfilledMode(VeernormError):
    """Operation needs Dehn-filling data that was not supplied."""


class ClassOutsideCone(VeernormError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NotCappable(VeernormError):
    """Boundary curves fail the capping trichotomy."""


class NotFoundWithinBudget(VeernormError):
    def __init__(self, message, budget):
        super().__init__(message)
        self.budget = budget


class PreconditionFailed(VeernormError):
    """A move was attempted at a position where it does not apply."""


class NonTermination(VeernormError):
    def __init__(self, message, budget):
        super().__init__(message)
        self.budget = budget
