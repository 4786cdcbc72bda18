"""Exception and warning types raised by the zero computation."""


class ZSFError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrixError(ZSFError):
    """A linear solve was asked of a numerically rank-deficient matrix."""

    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class NullSpaceError(ZSFError):
    """The requested null space is trivial."""


class NonzeroFeedthrough(ZSFError):
    """Some output has a nonzero direct feedthrough row in D."""


class NoRelativeDegree(ZSFError):
    """Some output has no finite relative degree (it never sees the input)."""


class TallSystemUnsupported(ZSFError):
    """Systems with fewer inputs than outputs have no zero-subspace form."""


class DegenerateStack(ZSFError):
    """No choice of B_z makes the transformation matrix nonsingular."""


class DegeneratePencil(ZSFError):
    """The Rosenbrock determinant vanishes identically."""


class IllConditionedWarning(UserWarning):
    """The transformation matrix is close to singular."""
