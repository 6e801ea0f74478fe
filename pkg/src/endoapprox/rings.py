"""Orders and quaternion orders as free integer modules with structure
constants, a Rosati-style involution, a positive-definite norm form and a
lattice (homology) representation.

A ring element is its coordinate vector over the configured basis; all
arithmetic goes through the structure constants, so it is exact, and the
norm of an element is the rational value of the Gram form at its
coordinates (squared norms everywhere, no radicals).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from . import linalg
from .exact import floor_sqrt, sqrt_upper


class RingError(ValueError):
    """Domain error raised for ill-formed ring data or mismatched elements."""


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RingSpec:
    """An order (or quaternion order) presented by structure constants.

    mul_table[j][k] is the coordinate vector of basis_j * basis_k.
    involution is the matrix of the conjugation on coordinates.
    gram is the symmetric positive-definite form giving squared norms.
    lattice_rep[j] is the integer matrix (size 2*dimension) by which
    basis_j acts on the homology of the simple factor.
    """

    tag: str
    rank: int
    dimension: int
    basis_labels: tuple[str, ...]
    mul_table: tuple[tuple[tuple[int, ...], ...], ...]
    involution: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]
    lattice_rep: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        t = self.rank
        if t < 1 or self.dimension < 1:
            raise RingError("rank and dimension must be positive")
        if len(self.basis_labels) != t or len(self.mul_table) != t:
            raise RingError("basis/multiplication table size mismatch")
        if any(len(row) != t or any(len(c) != t for c in row) for row in self.mul_table):
            raise RingError("multiplication table must be rank x rank x rank")
        if len(self.involution) != t or any(len(r) != t for r in self.involution):
            raise RingError("involution must be rank x rank")
        if len(self.gram) != t or any(len(r) != t for r in self.gram):
            raise RingError("gram must be rank x rank")
        two_d = 2 * self.dimension
        if len(self.lattice_rep) != t or any(
            len(m) != two_d or any(len(r) != two_d for r in m) for m in self.lattice_rep
        ):
            raise RingError("lattice representation must be rank matrices of size 2*dimension")
        self.validate()

    # -- elements ----------------------------------------------------------

    def element(self, coords) -> "RingElement":
        coords = tuple(_fr(c) for c in coords)
        if len(coords) != self.rank:
            raise RingError(f"element of {self.tag} needs {self.rank} coordinates")
        return RingElement(self, coords)

    def zero(self) -> "RingElement":
        return self.element([0] * self.rank)

    def one(self) -> "RingElement":
        return self.element([1] + [0] * (self.rank - 1))

    def integer(self, n) -> "RingElement":
        return self.element([n] + [0] * (self.rank - 1))

    def basis_element(self, j: int) -> "RingElement":
        return self.element([1 if i == j else 0 for i in range(self.rank)])

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        t = self.rank
        basis = [self.basis_element(j) for j in range(t)]
        one = self.one()
        for j in range(t):
            if basis[0] * basis[j] != basis[j] or basis[j] * basis[0] != basis[j]:
                raise RingError(f"{self.tag}: first basis element is not unital")
        for j, k, l in itertools.product(range(t), repeat=3):
            if (basis[j] * basis[k]) * basis[l] != basis[j] * (basis[k] * basis[l]):
                raise RingError(f"{self.tag}: multiplication is not associative")
        for j in range(t):
            if basis[j].conj().conj() != basis[j]:
                raise RingError(f"{self.tag}: involution is not an involution")
        for j, k in itertools.product(range(t), repeat=2):
            if (basis[j] * basis[k]).conj() != basis[k].conj() * basis[j].conj():
                raise RingError(f"{self.tag}: involution is not an anti-automorphism")
        if one.conj() != one:
            raise RingError(f"{self.tag}: involution does not fix the identity")
        g = [list(row) for row in self.gram]
        for i in range(t):
            for j in range(t):
                if g[i][j] != g[j][i]:
                    raise RingError(f"{self.tag}: gram form is not symmetric")
        for k in range(1, t + 1):
            minor = [row[:k] for row in g[:k]]
            if linalg.det(minor) <= 0:
                raise RingError(f"{self.tag}: gram form is not positive-definite")
        # lattice representation: unital ring homomorphism, faithful
        two_d = 2 * self.dimension
        rho = [linalg.mat(m) for m in self.lattice_rep]
        if rho[0] != linalg.identity(two_d):
            raise RingError(f"{self.tag}: lattice representation is not unital")
        for j, k in itertools.product(range(t), repeat=2):
            prod = linalg.mat_mul(rho[j], rho[k])
            expect = linalg.zeros(two_d, two_d)
            for l in range(t):
                c = self.mul_table[j][k][l]
                if c:
                    expect = linalg.mat_add(expect, linalg.mat_scale(rho[l], Fraction(c)))
            if prod != expect:
                raise RingError(f"{self.tag}: lattice representation does not respect products")
        flat = [[m[r][c] for r in range(two_d) for c in range(two_d)] for m in rho]
        if linalg.rank(flat) != t:
            raise RingError(f"{self.tag}: lattice representation is not faithful")

    # -- derived data ------------------------------------------------------

    @property
    def is_commutative(self) -> bool:
        return all(
            self.mul_table[j][k] == self.mul_table[k][j]
            for j in range(self.rank)
            for k in range(j + 1, self.rank)
        )

    def rho(self, a: "RingElement") -> linalg.Matrix:
        """Image of an element under the lattice representation."""
        two_d = 2 * self.dimension
        out = linalg.zeros(two_d, two_d)
        for j, c in enumerate(a.coords):
            if c:
                out = linalg.mat_add(out, linalg.mat_scale(linalg.mat(self.lattice_rep[j]), c))
        return out

    def right_mul_matrix(self, a: "RingElement") -> linalg.Matrix:
        """Matrix of x -> x*a on coordinates."""
        cols = [(self.basis_element(j) * a).coords for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]


@dataclass(frozen=True)
class RingElement:
    ring: RingSpec
    coords: tuple[Fraction, ...]

    def _check(self, other: "RingElement") -> None:
        if self.ring.tag != other.ring.tag:
            raise RingError(f"mixed rings: {self.ring.tag} vs {other.ring.tag}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        t = self.ring.rank
        out = [Fraction(0)] * t
        table = self.ring.mul_table
        for j, a in enumerate(self.coords):
            if not a:
                continue
            for k, b in enumerate(other.coords):
                if not b:
                    continue
                ab = a * b
                row = table[j][k]
                for l in range(t):
                    if row[l]:
                        out[l] += ab * row[l]
        return RingElement(self.ring, tuple(out))

    def scale(self, c) -> "RingElement":
        c = _fr(c)
        return RingElement(self.ring, tuple(c * a for a in self.coords))

    def conj(self) -> "RingElement":
        r = self.ring.involution
        t = self.ring.rank
        out = tuple(
            sum((Fraction(r[i][j]) * self.coords[j] for j in range(t)), Fraction(0))
            for i in range(t)
        )
        return RingElement(self.ring, out)

    def norm_sq(self) -> Fraction:
        g = self.ring.gram
        t = self.ring.rank
        total = Fraction(0)
        for i in range(t):
            ci = self.coords[i]
            if not ci:
                continue
            for j in range(t):
                if self.coords[j]:
                    total += ci * g[i][j] * self.coords[j]
        return total

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def sup_coord(self) -> Fraction:
        return max((abs(c) for c in self.coords), default=Fraction(0))

    def __repr__(self) -> str:
        terms = [f"{c}*{l}" for c, l in zip(self.coords, self.ring.basis_labels) if c]
        return f"<{self.ring.tag}: {' + '.join(terms) or '0'}>"


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def rosati_norm_sq(a: RingElement) -> Fraction:
    return a.norm_sq()


class LambdaMin(NamedTuple):
    value_sq: Fraction
    witness: RingElement


def _box_bounds(gram: linalg.Matrix, radius_sq: Fraction) -> list[int]:
    """Per-coordinate bounds: |a_i| <= sqrt(radius_sq * (G^-1)_ii)."""
    t = len(gram)
    inv = linalg.solve([row[:] for row in gram], linalg.identity(t))
    assert inv is not None
    return [floor_sqrt(radius_sq * inv[i][i]) for i in range(t)]


def enumerate_short_vectors(ring: RingSpec, radius_sq: Fraction) -> Iterator[RingElement]:
    """All nonzero integral elements with squared norm <= radius_sq.

    Box enumeration inside the certified bound |a_i|^2 <= radius_sq*(G^-1)_ii;
    only representatives with positive leading coordinate are yielded (the
    norm is invariant under negation).
    """
    gram = linalg.mat(ring.gram)
    bounds = _box_bounds(gram, radius_sq)
    ranges = [range(-b, b + 1) for b in bounds]
    for coords in itertools.product(*ranges):
        first = next((c for c in coords if c != 0), 0)
        if first <= 0:
            continue
        elem = ring.element(coords)
        if elem.norm_sq() <= radius_sq:
            yield elem


def lambda_min_nonzero(ring: RingSpec) -> LambdaMin:
    """Least squared norm over nonzero elements, with a witness attaining it.

    The search radius G[0][0] is the squared norm of the identity, so the
    minimum is always attained inside the box.
    """
    radius_sq = ring.gram[0][0]
    best: RingElement | None = None
    best_sq = None
    for elem in enumerate_short_vectors(ring, radius_sq):
        n = elem.norm_sq()
        if best_sq is None or n < best_sq:
            best, best_sq = elem, n
    assert best is not None and best_sq is not None and best_sq > 0
    return LambdaMin(best_sq, best)


def norm_equivalence_constants(ring: RingSpec) -> tuple[Fraction, Fraction]:
    """(c0_sq, c1_sq) with c0_sq*|a|_inf^2 <= |a|^2 <= c1_sq*|a|_inf^2.

    c1_sq is the entry-sum of |G|; c0_sq is a certified rational lower
    bound on the least eigenvalue of G (exact when that eigenvalue is
    rational).
    """
    gram = linalg.mat(ring.gram)
    c1_sq = sum(abs(x) for row in gram for x in row)
    c0_sq = linalg.min_eigenvalue_lower(gram)
    if c0_sq <= 0:
        raise RingError(f"{ring.tag}: gram form is not positive-definite")
    return c0_sq, c1_sq


@dataclass(frozen=True)
class ProductRingSpec:
    """Ordered product of pairwise distinct simple-factor rings."""

    factors: tuple[RingSpec, ...]

    def __post_init__(self):
        tags = [f.tag for f in self.factors]
        if len(set(tags)) != len(tags):
            raise RingError("product factors must carry distinct tags")
        if not self.factors:
            raise RingError("product of zero rings")

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    def element(self, parts) -> "ProductElement":
        parts = tuple(parts)
        if len(parts) != len(self.factors):
            raise RingError("product element needs one part per factor")
        for part, spec in zip(parts, self.factors):
            if part.ring.tag != spec.tag:
                raise RingError("product element part belongs to the wrong factor")
        return ProductElement(self, parts)

    def from_coords(self, coords) -> "ProductElement":
        coords = list(coords)
        if len(coords) != self.rank:
            raise RingError("product element coordinate length mismatch")
        parts = []
        at = 0
        for f in self.factors:
            parts.append(f.element(coords[at : at + f.rank]))
            at += f.rank
        return ProductElement(self, tuple(parts))

    def embed(self, index: int, a: RingElement) -> "ProductElement":
        parts = [f.zero() for f in self.factors]
        parts[index] = a
        return ProductElement(self, tuple(parts))

    def diagonal_int(self, n: int) -> "ProductElement":
        return ProductElement(self, tuple(f.integer(n) for f in self.factors))


@dataclass(frozen=True)
class ProductElement:
    product: ProductRingSpec
    parts: tuple[RingElement, ...]

    def norm_sq(self) -> Fraction:
        return sum((p.norm_sq() for p in self.parts), Fraction(0))

    def coords(self) -> list[Fraction]:
        out: list[Fraction] = []
        for p in self.parts:
            out.extend(p.coords)
        return out

    def sup_coord(self) -> Fraction:
        return max((p.sup_coord() for p in self.parts), default=Fraction(0))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __add__(self, other: "ProductElement") -> "ProductElement":
        return ProductElement(self.product, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other: "ProductElement") -> "ProductElement":
        return ProductElement(self.product, tuple(a - b for a, b in zip(self.parts, other.parts)))

    def scale(self, c) -> "ProductElement":
        return ProductElement(self.product, tuple(p.scale(c) for p in self.parts))


def product_constants(product: ProductRingSpec) -> dict[str, Fraction]:
    """Lattice constants of the product ring under the block-diagonal Gram.

    c0_sq/c1_sq extend the per-factor constants; lambda_sq is the least
    factor minimum; tau_norm_sum_upper is a certified rational upper bound
    on the sum of the basis-element norms.
    """
    c0s, c1s = zip(*(norm_equivalence_constants(f) for f in product.factors))
    lam = min(lambda_min_nonzero(f).value_sq for f in product.factors)
    tau_sum_upper = Fraction(0)
    for f in product.factors:
        for j in range(f.rank):
            tau_sum_upper += sqrt_upper(f.basis_element(j).norm_sq())
    return {
        "c0_sq": min(c0s),
        "c1_sq": sum(c1s, Fraction(0)),
        "lambda_sq": lam,
        "tau_norm_sum_upper": tau_sum_upper,
    }


def compute_Q0(product: ProductRingSpec) -> int:
    """Least admissible Dirichlet modulus for the ring: the smallest integer
    at least 2*max(1, 1/c0, sum_i |tau_i| / lambda).

    Irrational terms enter through certified rational upper bounds, and all
    square-root comparisons happen on squares, so the result is a certified
    integer upper bound for the true formula value.
    """
    consts = product_constants(product)
    # upper bound for 1/c0 = sqrt(1/c0_sq)
    inv_c0_upper = sqrt_upper(1 / consts["c0_sq"])
    # upper bound for sum|tau| / lambda: certified numerator over sqrt lower bound
    ratio_upper = consts["tau_norm_sum_upper"] / _sqrt_lower_positive(consts["lambda_sq"])
    value = 2 * max(Fraction(1), inv_c0_upper, ratio_upper)
    q0 = int(value) if value.denominator == 1 else int(value) + 1
    return q0


def _sqrt_lower_positive(x: Fraction) -> Fraction:
    from .exact import sqrt_lower

    lo = sqrt_lower(x)
    if lo <= 0:
        raise RingError("square root lower bound collapsed to zero")
    return lo


# -- reference rings -------------------------------------------------------


def integer_ring(tag: str = "Z") -> RingSpec:
    return RingSpec(
        tag=tag,
        rank=1,
        dimension=1,
        basis_labels=("1",),
        mul_table=(((1,),),),
        involution=((1,),),
        gram=((Fraction(1),),),
        lattice_rep=((((1, 0), (0, 1))),),
    )


def gaussian_ring(tag: str = "Zi") -> RingSpec:
    """Z[i] acting on a CM elliptic factor: basis 1, i."""
    return RingSpec(
        tag=tag,
        rank=2,
        dimension=1,
        basis_labels=("1", "i"),
        mul_table=(
            ((1, 0), (0, 1)),
            ((0, 1), (-1, 0)),
        ),
        involution=((1, 0), (0, -1)),
        gram=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        lattice_rep=(
            ((1, 0), (0, 1)),
            ((0, -1), (1, 0)),
        ),
    )


def eisenstein_ring(tag: str = "Zw") -> RingSpec:
    """Z[w] with w^2 = -1 - w (third root of unity): basis 1, w."""
    return RingSpec(
        tag=tag,
        rank=2,
        dimension=1,
        basis_labels=("1", "w"),
        mul_table=(
            ((1, 0), (0, 1)),
            ((0, 1), (-1, -1)),
        ),
        involution=((1, -1), (0, -1)),  # conj(w) = w^2 = -1 - w
        gram=((Fraction(1), Fraction(-1, 2)), (Fraction(-1, 2), Fraction(1))),
        lattice_rep=(
            ((1, 0), (0, 1)),
            ((0, -1), (1, -1)),
        ),
    )


def quaternion_ring(tag: str = "Hq") -> RingSpec:
    """The quaternion order with basis 1, i, j, k (i^2 = j^2 = -1, ij = k)
    inside the rational Hamilton quaternions; the norm form is the reduced
    norm, the involution is quaternion conjugation.
    """
    one = (1, 0, 0, 0)
    i = (0, 1, 0, 0)
    j = (0, 0, 1, 0)
    k = (0, 0, 0, 1)
    ni = (0, -1, 0, 0)
    nj = (0, 0, -1, 0)
    nk = (0, 0, 0, -1)
    none_ = (-1, 0, 0, 0)
    mul = (
        (one, i, j, k),
        (i, none_, k, nj),
        (j, nk, none_, i),
        (k, j, ni, none_),
    )
    # action on H (dimension 2 factor): left multiplication on basis 1,i,j,k
    rep_one = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    rep_i = ((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0))
    rep_j = ((0, 0, -1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, -1, 0, 0))
    rep_k = ((0, 0, 0, -1), (0, 0, -1, 0), (0, 1, 0, 0), (1, 0, 0, 0))
    eye = Fraction(1)
    return RingSpec(
        tag=tag,
        rank=4,
        dimension=2,
        basis_labels=("1", "i", "j", "k"),
        mul_table=mul,
        involution=((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
        gram=(
            (eye, Fraction(0), Fraction(0), Fraction(0)),
            (Fraction(0), eye, Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(0), eye, Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(0), eye),
        ),
        lattice_rep=(rep_one, rep_i, rep_j, rep_k),
    )


def reference_rings() -> dict[str, RingSpec]:
    return {
        "Z": integer_ring(),
        "Zi": gaussian_ring(),
        "Zw": eisenstein_ring(),
        "Hq": quaternion_ring(),
    }
