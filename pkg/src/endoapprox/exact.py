"""Certified rational arithmetic: square roots, n-th roots, fractional
powers and quadratic-surd comparisons, all with exact directional bounds.

Nothing in here ever produces a float.  Quantities of the form x + y*sqrt(s)
with rational x, y, s are compared by sign analysis and squaring, so every
comparison in the package is decided exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

Rat = Fraction

DEFAULT_SQRT_DIGITS = 24


def floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for rational x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    # floor(sqrt(x)) == isqrt(floor(x)) for x >= 0
    return isqrt(x.numerator // x.denominator)


def ceil_sqrt(x: Fraction) -> int:
    """Smallest integer q with q*q >= x, for rational x >= 0."""
    r = floor_sqrt(x)
    return r if Fraction(r * r) >= x else r + 1


def sqrt_bounds(x: Fraction, digits: int = DEFAULT_SQRT_DIGITS) -> tuple[Fraction, Fraction]:
    """Certified rational bounds lo <= sqrt(x) <= hi with ~`digits` decimals."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0), Fraction(0)
    exact = exact_sqrt(x)
    if exact is not None:
        return exact, exact
    n, d = x.numerator, x.denominator
    scale = 10 ** digits
    # sqrt(n/d) = sqrt(n*d)/d
    root = isqrt(n * d * scale * scale)
    lo = Fraction(root, d * scale)
    hi = Fraction(root + 1, d * scale)
    return lo, hi


def sqrt_lower(x: Fraction, digits: int = DEFAULT_SQRT_DIGITS) -> Fraction:
    return sqrt_bounds(x, digits)[0]


def sqrt_upper(x: Fraction, digits: int = DEFAULT_SQRT_DIGITS) -> Fraction:
    return sqrt_bounds(x, digits)[1]


def exact_sqrt(x: Fraction) -> Fraction | None:
    """sqrt(x) if x is a perfect rational square, else None."""
    if x < 0:
        return None
    rn = isqrt(x.numerator)
    rd = isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def floor_nth_root(n: int, k: int) -> int:
    """floor(n**(1/k)) for integers n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise ValueError("floor_nth_root needs n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    # Newton iteration on integers, seeded from the bit length.
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def _root_bounds(x: Fraction, k: int, digits: int) -> tuple[Fraction, Fraction]:
    """Certified bounds on x**(1/k) for x > 0, k >= 1."""
    n, d = x.numerator, x.denominator
    rn, rd = floor_nth_root(n, k), floor_nth_root(d, k)
    if rn ** k == n and rd ** k == d:
        exact = Fraction(rn, rd)
        return exact, exact
    scale = 10 ** digits
    # x**(1/k) = (n * d**(k-1))**(1/k) / d
    root = floor_nth_root(n * d ** (k - 1) * scale ** k, k)
    return Fraction(root, d * scale), Fraction(root + 1, d * scale)


def pow_bounds(x: Fraction, e: Fraction, digits: int = DEFAULT_SQRT_DIGITS) -> tuple[Fraction, Fraction]:
    """Certified rational bounds lo <= x**e <= hi for x > 0 and rational e.

    The direction of rounding is handled uniformly: callers pick the side
    they need (lower bounds for quantities that must not be overstated,
    upper bounds for the reverse).
    """
    if x <= 0:
        raise ValueError("pow_bounds needs a positive base")
    p, q = e.numerator, e.denominator
    if p == 0:
        return Fraction(1), Fraction(1)
    if p < 0:
        lo, hi = pow_bounds(x, -e, digits)
        # reciprocal flips the bounds; lo > 0 is guaranteed by construction
        return 1 / hi, 1 / lo
    y = x ** p  # exact rational
    if q == 1:
        return y, y
    return _root_bounds(y, q, digits)


def pow_lower(x: Fraction, e: Fraction, digits: int = DEFAULT_SQRT_DIGITS) -> Fraction:
    return pow_bounds(x, e, digits)[0]


def pow_upper(x: Fraction, e: Fraction, digits: int = DEFAULT_SQRT_DIGITS) -> Fraction:
    return pow_bounds(x, e, digits)[1]


# -- quadratic surds -------------------------------------------------------
#
# All comparisons below decide predicates about u + v*sqrt(s) exactly,
# with u, v, s rational and s >= 0.


def le_linear_sqrt(u: Fraction, v: Fraction, s: Fraction) -> bool:
    """Decide u <= v*sqrt(s) exactly."""
    if s < 0:
        raise ValueError("negative radicand")
    if v >= 0:
        if u <= 0:
            return True
        return u * u <= v * v * s
    # v < 0: rhs <= 0
    if u > 0:
        return False
    return u * u >= v * v * s


def surd_le(u: Fraction, v: Fraction, s: Fraction, bound: Fraction) -> bool:
    """Decide u + v*sqrt(s) <= bound exactly."""
    return le_linear_sqrt(u - bound, -v, s)


def floor_mul_sqrt(c: Fraction, s: Fraction) -> int:
    """floor(c*sqrt(s)) for rational c and s >= 0."""
    if s < 0:
        raise ValueError("negative radicand")
    if c == 0 or s == 0:
        return 0
    if c > 0:
        return floor_sqrt(c * c * s)
    # floor(-x) = -ceil(x)
    return -ceil_sqrt(c * c * s)


def round_mul_sqrt(c: Fraction, s: Fraction) -> int:
    """Nearest integer to c*sqrt(s); exact half-integer ties go to even."""
    f = floor_mul_sqrt(c, s)
    # compare c*sqrt(s) - f against 1/2, i.e. 2*c*sqrt(s) against 2f + 1
    half = Fraction(2 * f + 1)
    if _surd_is_zero(half, -2 * c, s):
        # exact tie: round to even
        return f if f % 2 == 0 else f + 1
    # round up iff 2c*sqrt(s) > 2f + 1; ties were handled above
    return f + 1 if le_linear_sqrt(half, 2 * c, s) else f


def _surd_is_zero(u: Fraction, v: Fraction, s: Fraction) -> bool:
    """Decide u + v*sqrt(s) == 0 exactly."""
    if v == 0:
        return u == 0
    if s == 0:
        return u == 0
    # u = -v*sqrt(s) forces opposite signs and u^2 == v^2 s
    if (u > 0) == (v > 0):
        return False
    return u * u == v * v * s


def surd_eq(u: Fraction, v: Fraction, s: Fraction) -> bool:
    return _surd_is_zero(u, v, s)
