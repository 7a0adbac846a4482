r"""Derivatives of the affine self-maps attached to the cylinder directions.

In the flat coordinates the simultaneous Dehn twist in all the cylinders of
an equal-modulus direction is affine; its derivative is the unit shear

    horizontal:  [[1, s], [0, 1]]        vertical:  [[1, 0], [-s, 1]]

with s = circumference/height, the common inverse modulus.  The vertical
convention is the conjugate of the horizontal one by a quarter turn.  The
central hyperelliptic involution has derivative -Id; the generator of the
parabolic subgroup over the horizontal direction is the 2(2g+1)-st twist
power composed with the involution, whose derivative has trace exactly -2
(the sign carried by the central element).
"""

from dataclasses import dataclass
import re

import mpmath

from .errors import InvalidMatrixError, NotParabolicError, ParameterError
from .flat_surface import HORIZONTAL, VERTICAL, cylinder_decomposition, working_precision
from .precision import value_precision

DET_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Mat2:
    """A 2x2 real matrix with unit determinant (checked where it matters)."""

    a: object
    b: object
    c: object
    d: object

    def trace(self):
        with mpmath.workprec(value_precision(self.a, self.d)):
            return self.a + self.d

    def det(self):
        with mpmath.workprec(value_precision(self.a, self.b, self.c, self.d)):
            return self.a * self.d - self.b * self.c

    def __mul__(self, other):
        entries = (self.a, self.b, self.c, self.d, other.a, other.b, other.c, other.d)
        with mpmath.workprec(value_precision(*entries)):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )

    def __neg__(self):
        # mpmath rounds even unary minus at ambient precision; keep all bits
        with mpmath.workprec(value_precision(self.a, self.b, self.c, self.d)):
            return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        # valid for det = 1
        with mpmath.workprec(value_precision(self.a, self.b, self.c, self.d)):
            return Mat2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = identity_matrix()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))


def identity_matrix():
    return Mat2(1, 0, 0, 1)


def classify(m, tol=TRACE_TOLERANCE):
    """Classify a unit-determinant matrix as identity/parabolic/elliptic/hyperbolic.

    Plus or minus the identity is reported as ``identity`` (central).  The
    trace comparison against 2 uses ``tol``; the determinant check uses the
    stricter matrix tolerance.
    """
    det = m.det()
    if abs(det - 1) > DET_TOLERANCE * max(1, abs(det)):
        raise InvalidMatrixError(f"matrix determinant {det} is not 1")
    for sign in (1, -1):
        if (
            abs(m.a - sign) <= tol
            and abs(m.d - sign) <= tol
            and abs(m.b) <= tol
            and abs(m.c) <= tol
        ):
            return "identity"
    t = abs(m.trace())
    if t > 2 + tol:
        return "hyperbolic"
    if t < 2 - tol:
        return "elliptic"
    return "parabolic"


def twist_derivative(cylinders, tol=1e-12):
    """Derivative of the simultaneous unit twist in an equal-modulus direction.

    All cylinders must share a direction and have equal moduli (within the
    relative tolerance); otherwise the multitwist is not affine and a
    NotParabolicError is raised.
    """
    if not cylinders:
        raise ParameterError("need at least one cylinder")
    direction = cylinders[0].direction
    if any(c.direction != direction for c in cylinders):
        raise ParameterError("cylinders come from different directions")
    values = [c.circumference for c in cylinders] + [c.height for c in cylinders]
    with mpmath.workprec(value_precision(*values)):
        moduli = [c.modulus for c in cylinders]
        m0 = moduli[0]
        if any(abs(m - m0) > tol * abs(m0) for m in moduli):
            raise NotParabolicError(
                f"moduli in the {direction} direction are not all equal"
            )
        shear = cylinders[0].circumference / cylinders[0].height
    if direction == HORIZONTAL:
        return Mat2(1, shear, 0, 1)
    return Mat2(1, 0, -shear, 1)


@dataclass(frozen=True)
class AffineElement:
    """A symbolic word in the twist generators with its derivative matrix."""

    tokens: tuple  # ((symbol, exponent), ...) with symbols 'TA', 'TB', 'sigma'
    derivative: Mat2

    @property
    def label(self):
        if not self.tokens:
            return "1"
        parts = []
        for sym, k in self.tokens:
            parts.append(sym if k == 1 else f"{sym}^{k}")
        return " ".join(parts)

    def __mul__(self, other):
        return AffineElement(
            tokens=_merge_tokens(self.tokens + other.tokens),
            derivative=self.derivative * other.derivative,
        )

    def __pow__(self, k):
        if k == 0:
            return AffineElement((), identity_matrix())
        result = None
        base = self if k > 0 else self.inverse()
        for _ in range(abs(k)):
            result = base if result is None else result * base
        return result

    def inverse(self):
        tokens = tuple((sym, -k) for sym, k in reversed(self.tokens))
        return AffineElement(_merge_tokens(tokens), self.derivative.inverse())


def _merge_tokens(tokens):
    out = []
    for sym, k in tokens:
        if k == 0:
            continue
        if out and out[-1][0] == sym:
            total = out[-1][1] + k
            out.pop()
            if total:
                out.append((sym, total))
        else:
            out.append((sym, k))
    return tuple(out)


def generators(surface):
    """The twist elements and the central involution for a surface."""
    with working_precision(surface.precision):
        ta = twist_derivative(cylinder_decomposition(surface, HORIZONTAL))
        tb = twist_derivative(cylinder_decomposition(surface, VERTICAL))
        minus_id = Mat2(mpmath.mpf(-1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(-1))
    return {
        "TA": AffineElement((("TA", 1),), ta),
        "TB": AffineElement((("TB", 1),), tb),
        "sigma": AffineElement((("sigma", 1),), minus_id),
    }


def parabolic_generator(g, surface):
    """Generator of the parabolic subgroup over the horizontal direction.

    The word is the 2(2g+1)-st power of the horizontal multitwist composed
    with the central involution; its derivative has trace exactly -2 and the
    derivative of its square has trace exactly +2.
    """
    if surface.genus != g:
        raise ParameterError(f"surface has genus {surface.genus}, expected {g}")
    gens = generators(surface)
    return (gens["TA"] ** (2 * (2 * g + 1))) * gens["sigma"]


_WORD_TOKEN = re.compile(r"(TA|TB|sigma|s)\s*(?:\^\s*(-?\d+))?", re.IGNORECASE)


def evaluate_word(text, surface):
    """Evaluate a twist word like ``"TA^5 sigma TB^-2"`` on a surface."""
    gens = generators(surface)
    cleaned = text.replace("*", " ")
    pos = 0
    element = AffineElement((), identity_matrix())
    for match in _WORD_TOKEN.finditer(cleaned):
        if cleaned[pos : match.start()].strip():
            raise ParameterError(f"unparsable word fragment {cleaned[pos:match.start()]!r}")
        sym = match.group(1)
        sym = "sigma" if sym.lower() in ("sigma", "s") else sym.upper()
        k = int(match.group(2)) if match.group(2) else 1
        element = element * (gens[sym] ** k)
        pos = match.end()
    if cleaned[pos:].strip():
        raise ParameterError(f"unparsable word fragment {cleaned[pos:]!r}")
    return element
