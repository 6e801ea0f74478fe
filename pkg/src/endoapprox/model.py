"""The synthetic Mordell-Weil model: a computable stand-in for the group of
algebraic points with exact heights.

Each coordinate slot holds a torsion part (rationals mod 1, one per
homology coordinate) and a free part (coefficients in the factor ring
tensored with Q, over a scenario-chosen number of independent generators).
Heights are exact rationals: the free part is scored by the ring's Gram
form summed over generators, torsion contributes zero, and the height of a
point is the maximum over its slots.  Every group axiom the downstream
reductions rely on (ring action, integer homogeneity, triangle inequality,
divisibility, torsion of height zero) holds exactly by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .morphisms import AmbientSpec, BlockMorphism, MorphismError
from .rings import RingSpec


class ModelError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ModelSpace:
    """An ambient power together with per-factor free-module ranks."""

    ambient: AmbientSpec
    free_ranks: tuple[int, ...]

    def __post_init__(self):
        if len(self.free_ranks) != self.ambient.product.n_factors:
            raise ModelError("one free rank per ring factor required")
        if any(r < 0 for r in self.free_ranks):
            raise ModelError("free ranks must be non-negative")

    @property
    def counts(self) -> tuple[int, ...]:
        return self.ambient.counts

    @property
    def product(self):
        return self.ambient.product

    def with_counts(self, counts) -> "ModelSpace":
        return ModelSpace(self.ambient.with_counts(tuple(counts)), self.free_ranks)

    def zero_slot(self, factor: int) -> "SlotValue":
        spec = self.product.factors[factor]
        nu = self.free_ranks[factor]
        return SlotValue(
            torsion=tuple(Fraction(0) for _ in range(2 * spec.dimension)),
            free=tuple(tuple(Fraction(0) for _ in range(spec.rank)) for _ in range(nu)),
        )

    def zero(self) -> "ModelPoint":
        slots = tuple(
            tuple(self.zero_slot(i) for _ in range(c)) for i, c in enumerate(self.counts)
        )
        return ModelPoint(self, slots)

    def point(self, slots) -> "ModelPoint":
        return ModelPoint(self, tuple(tuple(s for s in fac) for fac in slots))

    def slot(self, factor: int, torsion=(), free=()) -> "SlotValue":
        spec = self.product.factors[factor]
        nu = self.free_ranks[factor]
        tors = [Fraction(0)] * (2 * spec.dimension)
        for idx, v in enumerate(torsion):
            tors[idx] = _fr(v) % 1
        fr = [[Fraction(0)] * spec.rank for _ in range(nu)]
        for k, coeff in enumerate(free):
            for l, v in enumerate(coeff):
                fr[k][l] = _fr(v)
        return SlotValue(tuple(tors), tuple(tuple(row) for row in fr))


@dataclass(frozen=True)
class SlotValue:
    """One ambient coordinate: torsion vector mod 1 plus free coefficients."""

    torsion: tuple[Fraction, ...]
    free: tuple[tuple[Fraction, ...], ...]

    def is_zero(self) -> bool:
        return all(t == 0 for t in self.torsion) and all(
            c == 0 for row in self.free for c in row
        )


@dataclass(frozen=True)
class ModelPoint:
    space: ModelSpace
    slots: tuple[tuple[SlotValue, ...], ...]

    def __post_init__(self):
        counts = self.space.counts
        if len(self.slots) != len(counts) or any(
            len(f) != c for f, c in zip(self.slots, counts)
        ):
            raise ModelError("slot shape does not match the space")

    # -- group structure ---------------------------------------------------

    def _check(self, other: "ModelPoint") -> None:
        if self.space != other.space:
            raise ModelError("points live in different spaces")

    def __add__(self, other: "ModelPoint") -> "ModelPoint":
        self._check(other)
        slots = tuple(
            tuple(_slot_add(a, b) for a, b in zip(fa, fb))
            for fa, fb in zip(self.slots, other.slots)
        )
        return ModelPoint(self.space, slots)

    def __neg__(self) -> "ModelPoint":
        slots = tuple(tuple(_slot_neg(s) for s in fac) for fac in self.slots)
        return ModelPoint(self.space, slots)

    def __sub__(self, other: "ModelPoint") -> "ModelPoint":
        return self + (-other)

    def int_mul(self, n: int) -> "ModelPoint":
        slots = tuple(tuple(_slot_int_mul(s, n) for s in fac) for fac in self.slots)
        return ModelPoint(self.space, slots)

    def is_zero(self) -> bool:
        return all(s.is_zero() for fac in self.slots for s in fac)

    def is_torsion(self) -> bool:
        return all(c == 0 for fac in self.slots for s in fac for row in s.free for c in row)

    # -- heights -----------------------------------------------------------

    def slot_height(self, factor: int, index: int) -> Fraction:
        spec = self.space.product.factors[factor]
        slot = self.slots[factor][index]
        total = Fraction(0)
        for coeff in slot.free:
            total += _form_value(spec, coeff)
        return total

    def height(self) -> Fraction:
        best = Fraction(0)
        for i, fac in enumerate(self.slots):
            for j in range(len(fac)):
                h = self.slot_height(i, j)
                if h > best:
                    best = h
        return best


def _form_value(spec: RingSpec, coeff: tuple[Fraction, ...]) -> Fraction:
    g = spec.gram
    total = Fraction(0)
    for a in range(spec.rank):
        if coeff[a] == 0:
            continue
        for b in range(spec.rank):
            if coeff[b] != 0:
                total += coeff[a] * g[a][b] * coeff[b]
    return total


def _slot_add(a: SlotValue, b: SlotValue) -> SlotValue:
    return SlotValue(
        torsion=tuple((x + y) % 1 for x, y in zip(a.torsion, b.torsion)),
        free=tuple(
            tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.free, b.free)
        ),
    )


def _slot_neg(a: SlotValue) -> SlotValue:
    return SlotValue(
        torsion=tuple((-x) % 1 for x in a.torsion),
        free=tuple(tuple(-x for x in row) for row in a.free),
    )


def _slot_int_mul(a: SlotValue, n: int) -> SlotValue:
    return SlotValue(
        torsion=tuple((n * x) % 1 for x in a.torsion),
        free=tuple(tuple(n * x for x in row) for row in a.free),
    )


def _slot_ring_act(spec: RingSpec, e, slot: SlotValue) -> SlotValue:
    """Action of a ring element: lattice representation on torsion,
    module multiplication on free coefficients."""
    if not e.is_integral():
        raise ModelError("only integral ring elements act on model points")
    rho = spec.rho(e)
    two_d = 2 * spec.dimension
    tors = tuple(
        (sum((rho[r][c] * slot.torsion[c] for c in range(two_d)), Fraction(0))) % 1
        for r in range(two_d)
    )
    free = tuple(tuple((e * spec.element(coeff)).coords) for coeff in slot.free)
    return SlotValue(tors, free)


def apply_morphism(phi: BlockMorphism, x: ModelPoint) -> ModelPoint:
    """Evaluate a block morphism on a point; exact and additive."""
    if phi.source != x.space.counts:
        raise MorphismError("morphism source does not match the point's space")
    if phi.product is not x.space.product and phi.product != x.space.product:
        raise MorphismError("morphism and point use different ring products")
    target_space = x.space.with_counts(phi.target)
    out_slots = []
    for i, spec in enumerate(phi.product.factors):
        rows = phi.target[i]
        cols = phi.source[i]
        fac = []
        for r in range(rows):
            acc = target_space.zero_slot(i)
            for c in range(cols):
                e = phi.blocks[i][r][c]
                if e.is_zero():
                    continue
                acc = _slot_add(acc, _slot_ring_act(spec, e, x.slots[i][c]))
            fac.append(acc)
        out_slots.append(tuple(fac))
    return ModelPoint(target_space, tuple(out_slots))


def height(x: ModelPoint) -> Fraction:
    return x.height()


def divide(y: ModelPoint, b: int) -> ModelPoint:
    """The canonical b-division: [b] * result == y exactly.

    Free coefficients divide by b; each torsion coordinate t picks the
    representative t/b among the b-power many preimages.
    """
    if b < 1:
        raise ModelError("division needs a positive integer")
    slots = tuple(
        tuple(
            SlotValue(
                torsion=tuple(t / b for t in s.torsion),
                free=tuple(tuple(c / b for c in row) for row in s.free),
            )
            for s in fac
        )
        for fac in y.slots
    )
    return ModelPoint(y.space, slots)


def in_ball(x: ModelPoint, eps_sq: Fraction) -> bool:
    if eps_sq < 0:
        raise ModelError("ball radius must be non-negative")
    return x.height() <= eps_sq


def torsion_enum(space: ModelSpace, n: int, budget: int = 100_000):
    """All points with zero free part and torsion coordinates in (1/n)Z mod 1.

    The count is n ** (2 * sum(d_i * g_i)); anything above `budget` raises.
    """
    if n < 1:
        raise ModelError("torsion level must be positive")
    coord_count = sum(
        2 * spec.dimension * c
        for spec, c in zip(space.product.factors, space.counts)
    )
    total = n**coord_count
    if total > budget:
        raise ResourceError(f"torsion enumeration of {total} points exceeds budget {budget}")
    values = [Fraction(k, n) for k in range(n)]
    for assignment in itertools.product(values, repeat=coord_count):
        at = 0
        slots = []
        for i, spec in enumerate(space.product.factors):
            two_d = 2 * spec.dimension
            fac = []
            for _ in range(space.counts[i]):
                zero = space.zero_slot(i)
                fac.append(SlotValue(tuple(assignment[at : at + two_d]), zero.free))
                at += two_d
            slots.append(tuple(fac))
        yield ModelPoint(space, tuple(slots))


def rank_of_point(p: ModelPoint) -> tuple[int, ...]:
    """Per factor, the rational rank of the span of the ring-orbit of the
    free parts, divided by the ring rank."""
    from . import linalg

    out = []
    for i, spec in enumerate(p.space.product.factors):
        nu = p.space.free_ranks[i]
        vecs = []
        for slot in p.slots[i]:
            for k in range(spec.rank):
                tau = spec.basis_element(k)
                acted = tuple((tau * spec.element(coeff)).coords for coeff in slot.free)
                vecs.append([c for coeff in acted for c in coeff])
        if not vecs or nu == 0:
            out.append(0)
            continue
        q_rank = linalg.rank(vecs)
        if q_rank % spec.rank != 0:
            raise ModelError("orbit rank not divisible by the ring rank")
        out.append(q_rank // spec.rank)
    return tuple(out)


def concat_points(x: ModelPoint, p: ModelPoint) -> ModelPoint:
    """The pair (x, p): slots of x followed by slots of p, per factor."""
    if x.space.product != p.space.product or x.space.free_ranks != p.space.free_ranks:
        raise ModelError("pairing needs points over the same ring data")
    counts = tuple(a + b for a, b in zip(x.space.counts, p.space.counts))
    space = x.space.with_counts(counts)
    slots = tuple(fa + fb for fa, fb in zip(x.slots, p.slots))
    return ModelPoint(space, slots)


def split_point(xp: ModelPoint, left_counts) -> tuple[ModelPoint, ModelPoint]:
    left_counts = tuple(left_counts)
    right_counts = tuple(a - b for a, b in zip(xp.space.counts, left_counts))
    if any(c < 0 for c in right_counts):
        raise ModelError("split exceeds the point's slot counts")
    ls = tuple(fac[:c] for fac, c in zip(xp.slots, left_counts))
    rs = tuple(fac[c:] for fac, c in zip(xp.slots, left_counts))
    return (
        ModelPoint(xp.space.with_counts(left_counts), ls),
        ModelPoint(xp.space.with_counts(right_counts), rs),
    )


@dataclass(frozen=True)
class GeneratorSet:
    """Free generators of a finite-rank subgroup, grouped by factor.

    Each generator is a single-slot point of its factor; the free parts of
    the ring orbit must be rationally independent (full rank), and the
    generators must be torsion-free so integer relations N*y = G*gamma stay
    exact in the model.
    """

    space: ModelSpace  # counts = rank multi-index s
    point: ModelPoint

    def __post_init__(self):
        if self.point.space != self.space:
            raise ModelError("generator point must live in the declared space")
        for fac in self.point.slots:
            for s in fac:
                if any(t != 0 for t in s.torsion):
                    raise ModelError("generators must be torsion-free")
        if rank_of_point(self.point) != self.space.counts:
            raise ModelError("generators are not free (rank condition fails)")

    @property
    def rank_index(self) -> tuple[int, ...]:
        return self.space.counts

    def generator(self, factor: int, index: int) -> SlotValue:
        return self.point.slots[factor][index]

    def min_height(self) -> Fraction:
        heights = [
            self.point.slot_height(i, j)
            for i, fac in enumerate(self.point.slots)
            for j in range(len(fac))
        ]
        return min(heights) if heights else Fraction(0)


def empty_generators(space_g: ModelSpace) -> GeneratorSet:
    counts = tuple(0 for _ in space_g.counts)
    space = space_g.with_counts(counts)
    return GeneratorSet(space, space.zero())
