"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; generic misuse (wrong argument types, malformed payloads) stays a
plain ValueError.
"""


class OpExtError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(OpExtError):
    """Operands have incompatible shapes."""


class NotHermitian(OpExtError):
    """A matrix required to be Hermitian fails the symmetry tolerance."""


class NotPsd(OpExtError):
    """A matrix required to be positive semidefinite has a genuinely
    negative eigenvalue."""


class RestrictionConditionFailed(OpExtError):
    """The partial positive operator is not a restriction of any positive
    operator: its values do not vanish on the kernel of the domain Gram
    matrix, so no positive extension exists."""


class NotABounded(OpExtError):
    """The partial operator admits no finite bound relative to the given
    positive weight (values escape the weight's range, or the domain
    collapses where the values do not)."""


class IncompatibleInstance(OpExtError):
    """A two-corner completion instance violates compatibility or its
    declared bounds."""


class HypothesisViolated(OpExtError):
    """A hypothesis of the requested construction fails; the message names
    the condition."""


class NotFBounded(OpExtError):
    """The partial functional is unbounded relative to the given positive
    functional."""


class NotSymmetric(OpExtError):
    """The partial functional is not symmetric on its ideal, so no
    hermitian extension exists."""


class Infeasible(OpExtError):
    """A search found no feasible point."""


class InvalidDims(OpExtError):
    """Requested dimensions fall outside the supported range."""


class NumericalFailure(OpExtError):
    """An internal step produced a result outside its guaranteed envelope;
    indicates ill-conditioning rather than caller error."""
