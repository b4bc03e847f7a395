"""Exception types shared across the package."""


class EqschubError(Exception):
    """Base class for all errors raised by this package."""


class InvalidCartan(EqschubError):
    """Matrix violates the (generalized) Cartan matrix invariants."""


class RankMismatch(EqschubError):
    """Operands built over root systems of different rank."""


class ClosureOverflow(EqschubError):
    """Reflection closure exceeded its cap: the matrix is not finite type."""


class SingularCartan(EqschubError):
    """Finite-type construction requires an invertible Cartan matrix."""


class NotDivisible(EqschubError):
    """Exact polynomial division has no quotient."""


class NotGroupElement(EqschubError):
    """Matrix does not arise from a Weyl group element."""


class ResourceCap(EqschubError):
    """Enumeration exceeded its configured element cap."""


class NotFiniteType(EqschubError):
    """Operation is only defined for finite-type root systems."""


class InsufficientBound(EqschubError):
    """Restriction table bound too small for the requested computation."""


class DomainViolation(EqschubError):
    """Evaluation point lies outside the positive cone."""


class InternalInconsistency(EqschubError):
    """A computed quantity contradicts a structural invariant.

    Raised by the triangular solver (nonzero numerator at an element
    excluded by the support condition, or an inexact diagonal division)
    and by table construction when a verified invariant fails.  Always a
    bug, never a user error.
    """
