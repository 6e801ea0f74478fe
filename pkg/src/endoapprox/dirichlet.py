"""Simultaneous Diophantine approximation with a guaranteed exhaustive
backend and an independent feasibility oracle.

For rational targets alpha and an integer Q >= 2 the classical box
argument guarantees some denominator 1 <= b < Q**m with every
|alpha_i * b - beta_i| <= 1/Q; the exhaustive scan returns the smallest
such b.  Rounding ties (alpha_i * b exactly half-integral) go to even.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class DirichletError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class ApproxResult:
    denominator: int
    numerators: tuple[int, ...]
    error: Fraction
    bound: int  # the exclusive denominator bound Q**m

    def __post_init__(self):
        if not (1 <= self.denominator < self.bound):
            raise DirichletError("denominator outside the guaranteed range")


def _round_half_even(x: Fraction) -> int:
    # Fraction.__round__ implements round-half-to-even
    return round(x)


def _attempt(alpha: list[Fraction], b: int, tol: Fraction) -> tuple[tuple[int, ...], Fraction] | None:
    nums = []
    worst = Fraction(0)
    for a in alpha:
        scaled = a * b
        beta = _round_half_even(scaled)
        err = abs(scaled - beta)
        if err > tol:
            return None
        if err > worst:
            worst = err
        nums.append(beta)
    return tuple(nums), worst


def dirichlet_approx(alpha, q: int, budget: int = DEFAULT_BUDGET) -> ApproxResult:
    """Smallest denominator b with max_i |alpha_i*b - beta_i| <= 1/q."""
    alpha = [Fraction(a) for a in alpha]
    if not alpha:
        raise DirichletError("empty target vector")
    if q < 2:
        raise DirichletError("modulus must be at least 2")
    m = len(alpha)
    bound = q**m
    if bound - 1 > budget:
        raise BudgetError(f"scan of {bound - 1} denominators exceeds budget {budget}")
    tol = Fraction(1, q)
    for b in range(1, bound):
        hit = _attempt(alpha, b, tol)
        if hit is not None:
            nums, err = hit
            return ApproxResult(denominator=b, numerators=nums, error=err, bound=bound)
    raise AssertionError("box principle violated; unreachable for q >= 2")


def feasibility_oracle(alpha, q: int, budget: int = DEFAULT_BUDGET) -> list[tuple[int, Fraction]]:
    """The full table (b, best error) for every 1 <= b < q**m.

    Independent provenance source: best error per b is computed directly,
    with no reference to the tolerance test used by dirichlet_approx.
    """
    alpha = [Fraction(a) for a in alpha]
    if not alpha:
        raise DirichletError("empty target vector")
    if q < 2:
        raise DirichletError("modulus must be at least 2")
    bound = q ** len(alpha)
    if bound - 1 > budget:
        raise BudgetError(f"table of {bound - 1} rows exceeds budget {budget}")
    table = []
    for b in range(1, bound):
        worst = Fraction(0)
        for a in alpha:
            scaled = a * b
            err = abs(scaled - _round_half_even(scaled))
            if err > worst:
                worst = err
        table.append((b, worst))
    return table
