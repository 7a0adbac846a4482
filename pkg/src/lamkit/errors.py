"""Exception hierarchy shared by all lamkit modules."""


class LamkitError(Exception):
    """Base class for all errors raised by lamkit."""


class ParameterError(LamkitError, ValueError):
    """A rejected input parameter (genus too small, nonpositive count, ...)."""


class InvalidSurfaceError(LamkitError, ValueError):
    """A polygon/gluing datum violating the translation-surface invariants."""


class DecompositionError(LamkitError, RuntimeError):
    """Cylinder decomposition failed (direction not completely periodic,
    or a degenerate crossing configuration was detected)."""


class NotParabolicError(LamkitError, ValueError):
    """Cylinder moduli in the given direction are not all equal, so the
    simultaneous twist is not an affine map."""


class InvalidMatrixError(LamkitError, ValueError):
    """A 2x2 matrix outside SL(2, R) where a unit determinant is required."""


class InvalidWeightsError(LamkitError, ValueError):
    """Branch weights violating nonnegativity or a switch condition."""


class HypothesisError(LamkitError, ValueError):
    """An operation's mathematical hypothesis is violated (zero intersection
    entries, same-side pairing, non-projectivizable vector, ...)."""


class EdgeWordError(LamkitError, ValueError):
    """The configured edge-group generator is trivial or a proper power."""
