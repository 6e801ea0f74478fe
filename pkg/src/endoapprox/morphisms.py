"""Block morphisms between powers of the simple factors: norms, ranks,
codimension, weighted/special certificates, the section embedding, the
isogeny extension and non-commutative Gauss reduction.

A morphism is a block-diagonal family of per-factor matrices with entries
in that factor's ring; off-diagonal blocks between distinct factors do not
exist (non-isogenous factors admit no maps between them), so they are
never stored.  Column reorderings required by the weighted normal form are
kept as explicit column selections instead of physically permuting, which
keeps every composition exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import linalg
from .rings import ProductRingSpec, RingElement, RingError, RingSpec


class MorphismError(ValueError):
    pass


MultiIndex = tuple[int, ...]


def multi_total(idx: MultiIndex) -> int:
    return sum(idx)


@dataclass(frozen=True)
class AmbientSpec:
    """A power of the product variety: per-factor coordinate counts."""

    product: ProductRingSpec
    counts: MultiIndex

    def __post_init__(self):
        if len(self.counts) != self.product.n_factors:
            raise MorphismError("one count per ring factor required")
        if any(c < 0 for c in self.counts):
            raise MorphismError("coordinate counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def dimension(self) -> int:
        return sum(f.dimension * c for f, c in zip(self.product.factors, self.counts))

    def with_counts(self, counts: MultiIndex) -> "AmbientSpec":
        return AmbientSpec(self.product, tuple(counts))


class BlockMorphism:
    """Per-factor matrices over the factor rings; source/target multi-indices."""

    __slots__ = ("product", "source", "target", "blocks", "_norm_sq")

    def __init__(self, product: ProductRingSpec, source, target, blocks):
        self.product = product
        self.source = tuple(source)
        self.target = tuple(target)
        if len(self.source) != product.n_factors or len(self.target) != product.n_factors:
            raise MorphismError("multi-index length must match the number of factors")
        blocks = tuple(tuple(tuple(row) for row in block) for block in blocks)
        for i, (block, spec) in enumerate(zip(blocks, product.factors)):
            if len(block) != self.target[i]:
                raise MorphismError(f"factor {i}: expected {self.target[i]} rows")
            for row in block:
                if len(row) != self.source[i]:
                    raise MorphismError(f"factor {i}: expected {self.source[i]} columns")
                for e in row:
                    if e.ring.tag != spec.tag:
                        raise MorphismError(f"factor {i}: entry from wrong ring {e.ring.tag}")
        self.blocks = blocks
        self._norm_sq = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coords(cls, product, source, target, coord_blocks) -> "BlockMorphism":
        blocks = []
        for spec, block in zip(product.factors, coord_blocks):
            blocks.append([[spec.element(entry) for entry in row] for row in block])
        return cls(product, source, target, blocks)

    @classmethod
    def zero(cls, product, source, target) -> "BlockMorphism":
        blocks = [
            [[spec.zero() for _ in range(s)] for _ in range(t)]
            for spec, s, t in zip(product.factors, source, target)
        ]
        return cls(product, source, target, blocks)

    @classmethod
    def identity(cls, product, counts) -> "BlockMorphism":
        return cls.scalar(product, counts, 1)

    @classmethod
    def scalar(cls, product, counts, n: int) -> "BlockMorphism":
        blocks = []
        for spec, c in zip(product.factors, counts):
            blocks.append(
                [[spec.integer(n) if i == j else spec.zero() for j in range(c)] for i in range(c)]
            )
        return cls(product, counts, counts, blocks)

    # -- arithmetic --------------------------------------------------------

    def entry(self, factor: int, row: int, col: int) -> RingElement:
        return self.blocks[factor][row][col]

    def norm_sq(self) -> Fraction:
        if self._norm_sq is None:
            best = Fraction(0)
            for block in self.blocks:
                for row in block:
                    for e in row:
                        n = e.norm_sq()
                        if n > best:
                            best = n
            self._norm_sq = best
        return self._norm_sq

    def compose(self, other: "BlockMorphism") -> "BlockMorphism":
        """self o other (apply `other` first)."""
        if other.target != self.source:
            raise MorphismError("composition shape mismatch")
        blocks = []
        for spec, a, b in zip(self.product.factors, self.blocks, other.blocks):
            rows = len(a)
            mid = len(b)
            cols = len(b[0]) if b else 0
            out = []
            for i in range(rows):
                out_row = []
                for j in range(cols):
                    acc = spec.zero()
                    for p in range(mid):
                        acc = acc + a[i][p] * b[p][j]
                    out_row.append(acc)
                out.append(out_row)
            blocks.append(out)
        return BlockMorphism(self.product, other.source, self.target, blocks)

    def scale_int(self, n: int) -> "BlockMorphism":
        blocks = [[[e.scale(n) for e in row] for row in block] for block in self.blocks]
        return BlockMorphism(self.product, self.source, self.target, blocks)

    def scale_rational(self, c: Fraction) -> "BlockMorphism":
        blocks = [[[e.scale(c) for e in row] for row in block] for block in self.blocks]
        return BlockMorphism(self.product, self.source, self.target, blocks)

    def sub(self, other: "BlockMorphism") -> "BlockMorphism":
        if other.source != self.source or other.target != self.target:
            raise MorphismError("difference shape mismatch")
        blocks = [
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(ba, bb)]
            for ba, bb in zip(self.blocks, other.blocks)
        ]
        return BlockMorphism(self.product, self.source, self.target, blocks)

    def hstack(self, right: "BlockMorphism") -> "BlockMorphism":
        """(self | right): concatenate source coordinates per factor."""
        if right.target != self.target:
            raise MorphismError("hstack target mismatch")
        source = tuple(a + b for a, b in zip(self.source, right.source))
        blocks = []
        for ba, bb in zip(self.blocks, right.blocks):
            blocks.append([list(ra) + list(rb) for ra, rb in zip(ba, bb)])
        return BlockMorphism(self.product, source, self.target, blocks)

    def split_columns(self, left_counts: MultiIndex) -> tuple["BlockMorphism", "BlockMorphism"]:
        """Inverse of hstack: split source coordinates per factor."""
        right_counts = tuple(s - l for s, l in zip(self.source, left_counts))
        if any(c < 0 for c in right_counts):
            raise MorphismError("split exceeds source counts")
        lb, rb = [], []
        for block, l in zip(self.blocks, left_counts):
            lb.append([row[:l] for row in block])
            rb.append([row[l:] for row in block])
        left = BlockMorphism(self.product, left_counts, self.target, lb)
        right = BlockMorphism(self.product, right_counts, self.target, rb)
        return left, right

    def is_zero(self) -> bool:
        return all(e.is_zero() for block in self.blocks for row in block for e in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BlockMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(
            tuple(tuple(e.coords for e in row) for row in block) for block in self.blocks
        )))

    def coords_key(self):
        return tuple(
            tuple(tuple(e.coords for e in row) for row in block) for block in self.blocks
        )

    def __repr__(self):
        return f"BlockMorphism({self.source}->{self.target}, |.|^2={self.norm_sq()})"


def morphism_norm_sq(phi: BlockMorphism) -> Fraction:
    return phi.norm_sq()


def rationalize_block(spec: RingSpec, block) -> linalg.Matrix:
    """Replace each entry by its lattice-representation matrix."""
    two_d = 2 * spec.dimension
    rows = len(block)
    cols = len(block[0]) if block else 0
    out = linalg.zeros(rows * two_d, cols * two_d)
    for i in range(rows):
        for j in range(cols):
            m = spec.rho(block[i][j])
            for r in range(two_d):
                for c in range(two_d):
                    out[i * two_d + r][j * two_d + c] = m[r][c]
    return out


def rank_and_codim(phi: BlockMorphism, ambient: AmbientSpec) -> tuple[MultiIndex, int]:
    """Per-factor ranks over the rationalized ring and total codimension.

    The rank of a block is the rank of its lattice-representation image
    divided by 2*d_i; the codimension is sum(d_i * r_i).
    """
    if ambient.counts != phi.source:
        raise MorphismError("ambient does not match morphism source")
    ranks = []
    codim = 0
    for spec, block in zip(phi.product.factors, phi.blocks):
        if not block or not block[0]:
            ranks.append(0)
            continue
        q_rank = linalg.rank(rationalize_block(spec, block))
        two_d = 2 * spec.dimension
        if q_rank % two_d != 0:
            raise MorphismError("rationalized rank not divisible by 2d; not a module map")
        r_i = q_rank // two_d
        ranks.append(r_i)
        codim += spec.dimension * r_i
    return tuple(ranks), codim


@dataclass(frozen=True)
class WeightedCertificate:
    """Scale a with per-factor column selections realizing a*I inside phi.

    columns[i][j] is the source column of factor i whose image is a times
    the j-th target basis vector; slack_sq certifies |phi|^2 <= slack_sq*a^2.
    """

    scale: int
    columns: tuple[tuple[int, ...], ...]
    slack_sq: Fraction

    def verify(self, phi: BlockMorphism) -> None:
        if self.scale < 1:
            raise MorphismError("weighted scale must be a positive integer")
        for i, (spec, block) in enumerate(zip(phi.product.factors, phi.blocks)):
            cols = self.columns[i]
            if len(cols) != phi.target[i]:
                raise MorphismError("certificate needs one column per target row")
            if len(set(cols)) != len(cols):
                raise MorphismError("certificate columns must be distinct")
            for j, c in enumerate(cols):
                for r in range(phi.target[i]):
                    want = spec.integer(self.scale) if r == j else spec.zero()
                    if block[r][c] != want:
                        raise MorphismError("selected columns do not form a*I")
        if phi.norm_sq() > self.slack_sq * self.scale**2:
            raise MorphismError("norm exceeds the certified weighted slack")


@dataclass(frozen=True)
class SpecialCertificate:
    """(phi|phi') split with a weighted certificate for phi.

    left_counts is phi's source multi-index; slack_sq certifies
    |phi_tilde|^2 <= slack_sq * |phi|^2.
    """

    left_counts: MultiIndex
    weighted: WeightedCertificate
    slack_sq: Fraction

    def verify(self, phi_tilde: BlockMorphism) -> None:
        phi, _ = phi_tilde.split_columns(self.left_counts)
        self.weighted.verify(phi)
        if phi_tilde.norm_sq() > self.slack_sq * phi.norm_sq():
            raise MorphismError("norm exceeds the certified special slack")


def is_weighted(phi: BlockMorphism, slack_cap_sq: Fraction | None = None) -> WeightedCertificate | None:
    """Search for a common positive integer scale on an identity pattern.

    Only column selection (no physical reordering) is performed.  Among the
    admissible scales the one with the least slack |phi|^2/a^2 is chosen
    (the weighted normal form wants the scale comparable to the norm), with
    ties going to the smaller scale and then to the smallest columns.
    Absent result means no certificate exists.
    """
    candidates: dict[int, list[dict[int, list[int]]]] = {}
    for i, (spec, block) in enumerate(zip(phi.product.factors, phi.blocks)):
        rows = phi.target[i]
        for c in range(phi.source[i]):
            nonzero = [r for r in range(rows) if not block[r][c].is_zero()]
            if len(nonzero) != 1:
                continue
            r = nonzero[0]
            e = block[r][c]
            coords = e.coords
            if any(coords[l] != 0 for l in range(1, len(coords))):
                continue
            a = coords[0]
            if a.denominator != 1 or a <= 0:
                continue
            per_factor = candidates.setdefault(int(a), [dict() for _ in phi.blocks])
            per_factor[i].setdefault(r, []).append(c)
    norm_sq = phi.norm_sq()
    for a in sorted(candidates, key=lambda a: (max(Fraction(1), norm_sq / Fraction(a * a)), a)):
        per_factor = candidates[a]
        cols = []
        ok = True
        for i in range(len(phi.blocks)):
            chosen = []
            for r in range(phi.target[i]):
                options = per_factor[i].get(r, [])
                if not options:
                    ok = False
                    break
                chosen.append(min(options))
            if not ok:
                break
            cols.append(tuple(chosen))
        if not ok:
            continue
        slack_sq = max(Fraction(1), norm_sq / Fraction(a * a))
        if slack_cap_sq is not None and slack_sq > slack_cap_sq:
            continue
        cert = WeightedCertificate(scale=a, columns=tuple(cols), slack_sq=slack_sq)
        cert.verify(phi)
        return cert
    return None


def embedding_ir(phi: BlockMorphism, cert: WeightedCertificate) -> BlockMorphism:
    """The section i_r with phi o i_r = [a], inserting into the selected columns."""
    cert.verify(phi)
    blocks = []
    for i, spec in enumerate(phi.product.factors):
        g_i, r_i = phi.source[i], phi.target[i]
        block = [[spec.zero() for _ in range(r_i)] for _ in range(g_i)]
        for j, c in enumerate(cert.columns[i]):
            block[c][j] = spec.one()
        blocks.append(block)
    ir = BlockMorphism(phi.product, phi.target, phi.source, blocks)
    composed = phi.compose(ir)
    if composed != BlockMorphism.scalar(phi.product, phi.target, cert.scale):
        raise MorphismError("embedding does not compose to multiplication by a")
    return ir


def isogeny_extension(phi: BlockMorphism, cert: WeightedCertificate) -> BlockMorphism:
    """The square extension keeping phi on the first rows and the identity
    on the non-selected coordinates; invertible after rationalization.
    """
    cert.verify(phi)
    blocks = []
    for i, spec in enumerate(phi.product.factors):
        g_i, r_i = phi.source[i], phi.target[i]
        selected = set(cert.columns[i])
        rows = [list(phi.blocks[i][r]) for r in range(r_i)]
        for c in range(g_i):
            if c not in selected:
                rows.append([spec.one() if j == c else spec.zero() for j in range(g_i)])
        blocks.append(rows)
    ext = BlockMorphism(phi.product, phi.source, phi.source, blocks)
    for spec, block in zip(ext.product.factors, ext.blocks):
        if block and linalg.rank(rationalize_block(spec, block)) != len(block) * 2 * spec.dimension:
            raise MorphismError("isogeny extension is not invertible")
    return ext


def solve_ax_eq_by(x: RingElement, y: RingElement) -> tuple[RingElement, RingElement]:
    """Nonzero a, b with a*x == b*y; (y, x) commutatively, (y*conj(x), conj(x)*x)
    in a quaternion order."""
    if x.ring.tag != y.ring.tag:
        raise RingError("solve_ax_eq_by needs elements of one ring")
    if x.is_zero() or y.is_zero():
        raise RingError("solve_ax_eq_by needs nonzero elements")
    if x.ring.is_commutative:
        a, b = y, x
    else:
        a, b = y * x.conj(), x.conj() * x
    if a.is_zero() or b.is_zero() or a * x != b * y:
        raise RingError("left common multiple construction failed for this ring")
    return a, b


def gauss_reduce(spec: RingSpec, delta0) -> tuple[list[list[RingElement]], int]:
    """Left-only Gauss elimination: a matrix delta0' and positive integer a
    with delta0' @ delta0 == a * I, entries staying in the order.

    Elimination multiplies rows on the left only (no commutation); the
    diagonal is cleared to integers through the adjugate of each entry's
    right-multiplication matrix, merged by least common multiple, and the
    result is reduced by the content of the output matrix.
    """
    n = len(delta0)
    if n == 0:
        return [], 1
    if any(len(row) != n for row in delta0):
        raise MorphismError("gauss reduction needs a square block")
    work = [list(row) for row in delta0]
    trans = [[spec.integer(1) if i == j else spec.zero() for j in range(n)] for i in range(n)]

    def row_op(target_row: int, alpha: RingElement, beta: RingElement, pivot_row: int) -> None:
        for m in (work, trans):
            m[target_row] = [
                alpha * m[target_row][j] - beta * m[pivot_row][j] for j in range(n)
            ]

    for c in range(n):
        piv = next((r for r in range(c, n) if not work[r][c].is_zero()), None)
        if piv is None:
            raise MorphismError("gauss reduction on a rank-deficient block")
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            trans[c], trans[piv] = trans[piv], trans[c]
        for r in range(n):
            if r != c and not work[r][c].is_zero():
                alpha, beta = solve_ax_eq_by(work[r][c], work[c][c])
                row_op(r, alpha, beta, c)
                if not work[r][c].is_zero():
                    raise MorphismError("elimination failed to clear an entry")

    scales = []
    clearers = []
    for c in range(n):
        delta = work[c][c]
        if delta.is_zero():
            raise MorphismError("gauss reduction on a rank-deficient block")
        rmat = [[int(x) for x in row] for row in spec.right_mul_matrix(delta)]
        adj, d = linalg.adjugate_int(rmat)
        if d == 0:
            raise MorphismError("degenerate right-multiplication matrix")
        sign = 1 if d > 0 else -1
        coords = [sign * adj[i][0] for i in range(spec.rank)]
        clearer = spec.element(coords)
        if clearer * delta != spec.integer(abs(d)):
            raise MorphismError("adjugate clearing failed")
        scales.append(abs(d))
        clearers.append(clearer)

    m = 1
    for s in scales:
        m = lcm(m, s)
    out_rows = []
    for c in range(n):
        factor = m // scales[c]
        out_rows.append([(clearers[c] * trans[c][j]).scale(factor) for j in range(n)])

    content = 0
    for row in out_rows:
        for e in row:
            for coord in e.coords:
                assert coord.denominator == 1
                content = gcd(content, int(coord))
    if content > 1:
        out_rows = [[e.scale(Fraction(1, content)) for e in row] for row in out_rows]
        m //= content

    # final exactness check: delta0' @ delta0 == m * I
    for i in range(n):
        for j in range(n):
            acc = spec.zero()
            for p in range(n):
                acc = acc + out_rows[i][p] * delta0[p][j]
            want = spec.integer(m) if i == j else spec.zero()
            if acc != want:
                raise MorphismError("gauss reduction identity check failed")
    return out_rows, m


def weightify(psi: BlockMorphism, ambient: AmbientSpec) -> tuple[BlockMorphism, BlockMorphism, WeightedCertificate]:
    """An isogeny Delta of the target with phi = Delta o psi weighted.

    Pivot columns per factor maximize the norm of the rationalized
    determinant (ties broken by lexicographic column order).
    """
    ranks, _ = rank_and_codim(psi, ambient)
    if ranks != psi.target:
        raise MorphismError("weightify needs a surjective morphism")
    per_factor = []
    for i, (spec, block) in enumerate(zip(psi.product.factors, psi.blocks)):
        r_i, g_i = psi.target[i], psi.source[i]
        if r_i == 0:
            per_factor.append(((), [], 1))
            continue
        best_cols = None
        best_det = None
        for cols in itertools.combinations(range(g_i), r_i):
            sub = [[block[r][c] for c in cols] for r in range(r_i)]
            d = abs(linalg.det(rationalize_block(spec, sub)))
            if best_det is None or d > best_det:
                best_det, best_cols = d, cols
        if best_det is None or best_det == 0:
            raise MorphismError("no invertible pivot block; morphism not surjective")
        sub = [[block[r][c] for c in best_cols] for r in range(r_i)]
        reduced, a_i = gauss_reduce(spec, sub)
        per_factor.append((best_cols, reduced, a_i))

    m = 1
    for _, _, a_i in per_factor:
        m = lcm(m, a_i)
    delta_blocks = []
    for i, spec in enumerate(psi.product.factors):
        cols, reduced, a_i = per_factor[i]
        r_i = psi.target[i]
        factor = m // a_i
        delta_blocks.append(
            [[reduced[r][c].scale(factor) for c in range(r_i)] for r in range(r_i)]
        )
    delta = BlockMorphism(psi.product, psi.target, psi.target, delta_blocks)
    phi = delta.compose(psi)
    columns = tuple(per_factor[i][0] for i in range(len(psi.blocks)))
    slack_sq = max(Fraction(1), phi.norm_sq() / Fraction(m * m))
    cert = WeightedCertificate(scale=m, columns=columns, slack_sq=slack_sq)
    cert.verify(phi)
    return delta, phi, cert
