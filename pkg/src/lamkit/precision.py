"""Working-precision control for the geometric kernel.

All planar geometry is carried out with mpmath arbitrary-precision reals.
Vertex coordinates involve cos/sin of pi/(2g+1), so no fixed machine format
is exact; instead every constructor records the binary precision it was
built at and every geometric operation re-enters that precision.

The default is 128 bits and can be overridden globally with the
LAMKIT_PRECISION environment variable (in bits) or per call site.
"""

import os
from contextlib import contextmanager

import mpmath

from .errors import ParameterError

DEFAULT_PRECISION_BITS = 128
MIN_PRECISION_BITS = 64
PRECISION_ENV_VAR = "LAMKIT_PRECISION"

# Relative tolerance of the documented geometric predicates (equality of
# moduli, tiling identities, ...).  Deliberately far looser than the
# working precision so that roundoff never masquerades as geometry.
DEFAULT_TOLERANCE = 1e-12


def resolve_precision(bits=None):
    """Return the working precision in bits, honoring the environment override."""
    if bits is None:
        env = os.environ.get(PRECISION_ENV_VAR)
        bits = int(env) if env else DEFAULT_PRECISION_BITS
    bits = int(bits)
    if bits < MIN_PRECISION_BITS:
        raise ParameterError(
            f"working precision must be at least {MIN_PRECISION_BITS} bits, got {bits}"
        )
    return bits


@contextmanager
def working_precision(bits):
    """Context manager running mpmath at ``bits`` binary digits."""
    with mpmath.workprec(bits):
        yield mpmath.mp


def merge_tolerance(bits):
    """Absolute slack used to decide that two traced coordinates coincide.

    Half the working precision: hugely below any genuine geometric gap of
    the surfaces built here, hugely above accumulated roundoff.
    """
    return mpmath.mpf(2) ** (-(bits // 2))


def value_precision(*values, minimum=53):
    """Enough working bits to combine the given values without extra rounding.

    Inspects mpmath mantissa widths; plain ints/Fractions contribute nothing.
    """
    bits = minimum
    for v in values:
        tup = getattr(v, "_mpf_", None)
        if tup is not None:
            bits = max(bits, int(tup[3]))
    return bits + 16


def mpf_str(x):
    """Decimal string carrying the full working precision of ``x``."""
    with mpmath.workprec(mpmath.mp.prec):
        return mpmath.nstr(
            mpmath.mpf(x), int(mpmath.mp.dps) + 2, strip_zeros=True, min_fixed=1, max_fixed=0
        )


def parse_mpf(s):
    """Parse a decimal string produced by :func:`mpf_str` at current precision."""
    return mpmath.mpf(s)
