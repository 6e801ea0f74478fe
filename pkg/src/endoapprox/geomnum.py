"""Geometry of numbers on the model: certified lower-bound constants for
full-rank points, the row-morphism corollary, and generator inflation.

The constants come from an eigenvalue-margin construction: a certified
lower bound on the least eigenvalue of the Gram matrix of the ring orbit
of the point's free parts, with the perturbation radius chosen so the
perturbed combination keeps at least half the unperturbed norm.  Tighter
constants would be an optimization, not a correctness change: the
contract is only the inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exact import sqrt_upper
from .model import GeneratorSet, ModelPoint, SlotValue, _form_value, _slot_add, _slot_neg, _slot_ring_act, rank_of_point
from .rings import RingElement, RingSpec, norm_equivalence_constants


class GeomNumError(ValueError):
    pass


@dataclass(frozen=True)
class PointConstants:
    """(c_sq, eps0_sq) certified for one factor of a full-rank point:
    c_sq * sum |b_i|^2 h(p_i) <= h(sum b_i (p_i - xi_i)) whenever every
    h(xi_i) <= eps0_sq."""

    factor: int
    c_sq: Fraction
    eps0_sq: Fraction
    gram_lower: Fraction


def _factor_sub_constant_sq(spec: RingSpec) -> Fraction:
    """|e*c|^2 <= C |e|^2 |c|^2 for this factor (certified rational C)."""
    c0_sq, _ = norm_equivalence_constants(spec)
    basis = [spec.basis_element(j) for j in range(spec.rank)]
    t2 = Fraction(0)
    for a in basis:
        for b in basis:
            t2 += sqrt_upper((a * b).norm_sq())
    return (t2 * t2) / (c0_sq * c0_sq)


def _slot_inner(spec: RingSpec, a: SlotValue, b: SlotValue) -> Fraction:
    total = Fraction(0)
    g = spec.gram
    for ca, cb in zip(a.free, b.free):
        for i in range(spec.rank):
            if ca[i] == 0:
                continue
            for j in range(spec.rank):
                if cb[j] != 0:
                    total += ca[i] * g[i][j] * cb[j]
    return total


def point_lower_constants(p: ModelPoint, factor: int) -> PointConstants:
    """Certified (c_sq, eps0_sq) for the given factor of a full-rank point."""
    spec = p.space.product.factors[factor]
    slots = p.slots[factor]
    s = len(slots)
    if s == 0:
        raise GeomNumError("no slots in the requested factor")
    if rank_of_point(p)[factor] != s:
        raise GeomNumError("point is not of full rank in the requested factor")

    orbit: list[SlotValue] = []
    for slot in slots:
        for k in range(spec.rank):
            orbit.append(_slot_ring_act(spec, spec.basis_element(k), slot))
    gram = [[_slot_inner(spec, a, b) for b in orbit] for a in orbit]
    lam_low = linalg.min_eigenvalue_lower(gram)
    if lam_low <= 0:
        raise GeomNumError("orbit Gram matrix is not positive-definite")

    _, c1_sq = norm_equivalence_constants(spec)
    c_sub_sq = _factor_sub_constant_sq(spec)
    p_sq = max(
        sum((_form_value(spec, coeff) for coeff in slot.free), Fraction(0)) for slot in slots
    )
    c_sq = lam_low / (4 * c1_sq * p_sq)
    eps0_sq = lam_low / (4 * c_sub_sq * s * c1_sq)
    return PointConstants(factor=factor, c_sq=c_sq, eps0_sq=eps0_sq, gram_lower=lam_low)


def point_constants_all(p: ModelPoint) -> PointConstants | None:
    """Minimum constants over the non-empty factors; None for a rank-0 point
    (every precondition involving eps0 is then vacuous)."""
    items = [
        point_lower_constants(p, i)
        for i in range(p.space.product.n_factors)
        if len(p.slots[i]) > 0
    ]
    if not items:
        return None
    return PointConstants(
        factor=-1,
        c_sq=min(x.c_sq for x in items),
        eps0_sq=min(x.eps0_sq for x in items),
        gram_lower=min(x.gram_lower for x in items),
    )


def combine_slot(spec: RingSpec, coeffs, slots) -> SlotValue:
    """sum_i b_i * slot_i for ring elements b_i."""
    acc = None
    for b, slot in zip(coeffs, slots):
        term = _slot_ring_act(spec, b, slot)
        acc = term if acc is None else _slot_add(acc, term)
    if acc is None:
        raise GeomNumError("empty combination")
    return acc


def morphism_lower_bound_check(
    p: ModelPoint,
    factor: int,
    row: list[RingElement],
    xi: ModelPoint,
    consts: PointConstants,
) -> bool:
    """Check c_sq * min_i h(p_i) * |row|^2 <= h(row(p - xi)) for a
    perturbation inside the eps0 ball (precondition violations raise)."""
    spec = p.space.product.factors[factor]
    slots = p.slots[factor]
    xi_slots = xi.slots[factor]
    if len(row) != len(slots) or len(xi_slots) != len(slots):
        raise GeomNumError("row/point/perturbation length mismatch")
    if all(e.is_zero() for e in row):
        raise GeomNumError("zero row rejected (norm precondition)")
    for j in range(len(slots)):
        if xi.slot_height(factor, j) > consts.eps0_sq:
            raise GeomNumError("perturbation outside the certified ball")
    row_norm_sq = max(e.norm_sq() for e in row)
    min_h = min(
        sum((_form_value(spec, c) for c in slot.free), Fraction(0)) for slot in slots
    )
    diff = [_slot_add(a, _slot_neg(b)) for a, b in zip(slots, xi_slots)]
    image = combine_slot(spec, row, diff)
    image_h = sum((_form_value(spec, c) for c in image.free), Fraction(0))
    return consts.c_sq * min_h * row_norm_sq <= image_h


def inflate_generators(
    gamma: GeneratorSet, k0_sq: Fraction, eps_sq: Fraction
) -> tuple[GeneratorSet, int]:
    """Replace gamma by N*gamma for the smallest power of two N making
    (K0 + eps)|phi| <= ||phi(gamma)|| certified for every row morphism phi.

    Sufficient condition used (squared, surd-free):
    N^2 * c_sq * min_i h(gamma_i) >= 2 (K0^2 + eps^2).
    """
    if k0_sq < 0 or eps_sq < 0:
        raise GeomNumError("negative squared bounds")
    if gamma.point.space.ambient.total == 0:
        return gamma, 1
    target = 2 * (k0_sq + eps_sq)
    if target == 0:
        return gamma, 1
    consts = point_constants_all(gamma.point)
    assert consts is not None
    min_h = gamma.min_height()
    if min_h <= 0:
        raise GeomNumError("generators of height zero cannot be inflated")
    n = 1
    while Fraction(n * n) * consts.c_sq * min_h < target:
        n *= 2
    if n == 1:
        return gamma, 1
    inflated = GeneratorSet(gamma.space, gamma.point.int_mul(n))
    return inflated, n
