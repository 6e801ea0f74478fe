"""Witness-level reductions: specialization against a generator set,
translation through the section, the pair embedding/projection pair, and
the rank consistency check for special morphisms.

A witness is never trusted: every transformer re-verifies the defining
kernel equation exactly and re-derives the height bound it claims for the
output perturbation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm

from . import linalg
from .approx import op_constant_sq
from .geomnum import point_constants_all
from .ledger import ConstantLedger
from .model import (
    GeneratorSet,
    ModelPoint,
    ResourceError,
    apply_morphism,
    concat_points,
    divide,
    torsion_enum,
)
from .morphisms import (
    AmbientSpec,
    BlockMorphism,
    SpecialCertificate,
    WeightedCertificate,
    embedding_ir,
    is_weighted,
    rank_and_codim,
    weightify,
)


class WitnessError(ValueError):
    pass


class ConsistencyError(AssertionError):
    """A structurally impossible state was observed; indicates corrupted inputs."""


@dataclass(frozen=True)
class InclusionWitness:
    """A certificate that a point lies in a kernel translated by a small ball.

    Plain form (p is None): morphism(x + y + xi) == 0.
    Pair form (p given):    morphism((x, p) + xi) == 0, xi in the pair space.
    xi_bound_sq is the certified bound on h(xi); group_data optionally
    records (N, G) with N*y == G*gamma from specialization.
    """

    morphism: BlockMorphism
    x: ModelPoint
    xi: ModelPoint
    xi_bound_sq: Fraction
    p: ModelPoint | None = None
    y: ModelPoint | None = None
    weighted: WeightedCertificate | None = None
    special: SpecialCertificate | None = None
    group_data: tuple[int, BlockMorphism] | None = None

    def argument(self) -> ModelPoint:
        base = self.x if self.p is None else concat_points(self.x, self.p)
        if self.y is not None:
            base = base + self.y
        return base + self.xi

    def verify(self) -> None:
        if self.xi.height() > self.xi_bound_sq:
            raise WitnessError("perturbation height exceeds the recorded bound")
        image = apply_morphism(self.morphism, self.argument())
        if not image.is_zero():
            raise WitnessError("witness equation does not hold")
        if self.weighted is not None:
            phi = self.morphism
            if self.special is not None:
                phi, _ = self.morphism.split_columns(self.special.left_counts)
            self.weighted.verify(phi)
        if self.special is not None:
            self.special.verify(self.morphism)
        if self.group_data is not None and self.y is not None:
            n, g_mor = self.group_data
            if n < 1:
                raise WitnessError("group datum N must be a positive integer")


def _solve_in_span(gamma: GeneratorSet, y: ModelPoint) -> list[list[list[Fraction]]]:
    """Coefficients c[i][j][k*t..] with free(y_ij) = sum_k c_ijk . gamma_ik.

    Each coefficient is an element of the factor ring tensored with Q,
    returned as its coordinate vector; raises if y is not in the span.
    """
    out: list[list[list[Fraction]]] = []
    for i, spec in enumerate(y.space.product.factors):
        s_i = len(gamma.point.slots[i])
        t = spec.rank
        nu = y.space.free_ranks[i]
        cols: list[list[Fraction]] = []
        for k in range(s_i):
            slot = gamma.generator(i, k)
            for l in range(t):
                acted = [
                    (spec.basis_element(l) * spec.element(coeff)).coords
                    for coeff in slot.free
                ]
                cols.append([c for coeff in acted for c in coeff])
        a_matrix = [[cols[c][r] for c in range(len(cols))] for r in range(nu * t)]
        factor_coeffs: list[list[Fraction]] = []
        for slot in y.slots[i]:
            rhs = [[c] for coeff in slot.free for c in coeff]
            if not cols:
                if any(r[0] != 0 for r in rhs):
                    raise WitnessError("translate has free part outside the generator span")
                factor_coeffs.append([])
                continue
            sol = linalg.solve(a_matrix, rhs)
            if sol is None:
                raise WitnessError("translate has free part outside the generator span")
            factor_coeffs.append([row[0] for row in sol])
        out.append(factor_coeffs)
    return out


def specialize(
    w: InclusionWitness,
    gamma: GeneratorSet,
    k0_sq: Fraction,
    ledger: ConstantLedger,
) -> InclusionWitness:
    """Turn a witness against the generator-translated kernel into a pair
    witness against the kernel of the special morphism (N phi | phi G).

    N clears the coefficient denominators and the torsion of the translate,
    so N*y == G(gamma) holds exactly in the model.
    """
    if w.p is not None:
        raise WitnessError("specialize expects a plain witness")
    if w.weighted is None:
        raise WitnessError("specialize needs a weighted morphism")
    if w.xi_bound_sq > k0_sq:
        raise WitnessError("specialize needs eps <= K0")
    w.verify()
    phi = w.morphism
    y = w.y if w.y is not None else w.x.space.zero()

    coeffs = _solve_in_span(gamma, y)
    n = 1
    for fac in coeffs:
        for slot_c in fac:
            for c in slot_c:
                n = lcm(n, c.denominator)
    for fac in y.slots:
        for slot in fac:
            for tcoord in slot.torsion:
                n = lcm(n, tcoord.denominator)

    product = phi.product
    g_blocks = []
    for i, spec in enumerate(product.factors):
        s_i = len(gamma.point.slots[i])
        t = spec.rank
        rows = []
        for j in range(len(y.slots[i])):
            row = []
            flat = coeffs[i][j]
            for k in range(s_i):
                coords = [n * flat[k * t + l] for l in range(t)]
                row.append(spec.element(coords))
            rows.append(row)
        g_blocks.append(rows)
    g_mor = BlockMorphism(product, gamma.space.counts, y.space.counts, g_blocks)

    if y.int_mul(n) != apply_morphism(g_mor, gamma.point):
        raise ConsistencyError("N*y == G(gamma) failed after denominator clearing")

    phi_tilde = phi.scale_int(n).hstack(phi.compose(g_mor))
    n_weighted = WeightedCertificate(
        scale=n * w.weighted.scale,
        columns=w.weighted.columns,
        slack_sq=w.weighted.slack_sq,
    )
    left_norm_sq = phi.scale_int(n).norm_sq()
    special = SpecialCertificate(
        left_counts=phi.source,
        weighted=n_weighted,
        slack_sq=max(Fraction(1), phi_tilde.norm_sq() / left_norm_sq) if left_norm_sq else Fraction(1),
    )
    xi_pair = concat_points(w.xi, gamma.space.zero())
    out = InclusionWitness(
        morphism=phi_tilde,
        x=w.x,
        p=gamma.point,
        xi=xi_pair,
        xi_bound_sq=w.xi_bound_sq,
        weighted=n_weighted,
        special=special,
        group_data=(n, g_mor),
    )
    out.verify()
    return out


def translate_witness(w: InclusionWitness, ledger: ConstantLedger) -> InclusionWitness:
    """Trade the point part of a pair witness for a translate in the image
    of the section: phi(x + y + xi') == 0 with y = i_r(phi'(p) / a)."""
    if w.p is None or w.special is None:
        raise WitnessError("translate needs a pair witness with a special certificate")
    w.verify()
    phi_tilde = w.morphism
    cert = w.special
    phi, phi_prime = phi_tilde.split_columns(cert.left_counts)
    a = cert.weighted.scale
    ir = embedding_ir(phi, cert.weighted)

    y = apply_morphism(ir, divide(apply_morphism(phi_prime, w.p), a))
    xi_img = apply_morphism(phi_tilde, w.xi)
    xi_prime = apply_morphism(ir, divide(xi_img, a))

    c_op_sq = op_constant_sq(ledger, sum(phi_tilde.source))
    bound = c_op_sq * phi_tilde.norm_sq() * w.xi_bound_sq / Fraction(a * a)
    out = InclusionWitness(
        morphism=phi,
        x=w.x,
        y=y,
        xi=xi_prime,
        xi_bound_sq=bound,
        weighted=cert.weighted,
    )
    out.verify()
    return out


def gamma_embed(
    w: InclusionWitness,
    gamma: GeneratorSet,
    k0_sq: Fraction,
    ambient: AmbientSpec,
    ledger: ConstantLedger,
) -> InclusionWitness:
    """The injection x -> (x, gamma): weightify if necessary, then
    specialize.  x is recoverable by projection, so distinct witnesses map
    to distinct outputs."""
    if w.p is not None:
        raise WitnessError("gamma_embed expects a plain witness")
    witness = w
    if witness.weighted is None:
        cert = is_weighted(witness.morphism)
        if cert is None:
            delta, phi_w, cert = weightify(witness.morphism, ambient)
            witness = replace(witness, morphism=phi_w, weighted=cert)
        else:
            witness = replace(witness, weighted=cert)
        witness.verify()
    return specialize(witness, gamma, k0_sq, ledger)


def rank_check_special(
    phi_tilde: BlockMorphism,
    left_counts,
    p: ModelPoint,
    w: InclusionWitness,
    ambient: AmbientSpec,
    torsion_level: int = 2,
    torsion_budget: int = 5000,
) -> tuple[tuple[int, ...], BlockMorphism, SpecialCertificate]:
    """Assert the left block has full rank (impossible to fail for a valid
    witness within the eps0 ball), and produce Delta phi_tilde with the
    left part weighted; the kernel inclusion is checked on small torsion.
    """
    consts = point_constants_all(p)
    if consts is not None and w.xi_bound_sq > consts.eps0_sq:
        raise WitnessError("witness perturbation exceeds eps0(p); rank guarantee not applicable")
    w.verify()
    phi, _ = phi_tilde.split_columns(left_counts)
    ranks, _ = rank_and_codim(phi, ambient)
    if ranks != phi.target:
        raise ConsistencyError(
            "left block rank-deficient despite a valid witness inside eps0(p)"
        )
    delta, phi_w, cert_left = weightify(phi, ambient)
    psi_tilde = delta.compose(phi_tilde)
    special = SpecialCertificate(
        left_counts=tuple(left_counts),
        weighted=cert_left,
        slack_sq=max(Fraction(1), psi_tilde.norm_sq() / phi_w.norm_sq()),
    )
    special.verify(psi_tilde)

    pair_space = w.xi.space
    try:
        for z in torsion_enum(pair_space, torsion_level, budget=torsion_budget):
            if apply_morphism(phi_tilde, z).is_zero() and not apply_morphism(psi_tilde, z).is_zero():
                raise ConsistencyError("kernel torsion escaped the weighted kernel")
    except ResourceError:
        pass  # enumeration too large for the inline check; covered by suites
    return ranks, psi_tilde, special


def point_project(
    w: InclusionWitness,
    k0_sq: Fraction,
    ambient: AmbientSpec,
    ledger: ConstantLedger,
) -> InclusionWitness:
    """The injection (x, p) -> x: rank-check, weightify, then translate into
    the saturated orbit of p with a controlled perturbation."""
    if w.p is None or w.special is None:
        raise WitnessError("point projection expects a pair witness")
    if w.x.height() > k0_sq:
        raise WitnessError("witness point exceeds the configured height bound")
    left_counts = w.special.left_counts
    ranks, psi_tilde, special = rank_check_special(
        w.morphism, left_counts, w.p, w, ambient
    )
    psi, psi_prime = psi_tilde.split_columns(left_counts)
    a = special.weighted.scale
    ir = embedding_ir(psi, special.weighted)

    y = apply_morphism(ir, divide(apply_morphism(psi_prime, w.p), a))
    zeta = apply_morphism(ir, divide(apply_morphism(psi_tilde, w.xi), a))

    c_op_sq = op_constant_sq(ledger, sum(psi_tilde.source))
    bound = c_op_sq * psi_tilde.norm_sq() * w.xi_bound_sq / Fraction(a * a)
    out = InclusionWitness(
        morphism=psi,
        x=w.x,
        y=y,
        xi=zeta,
        xi_bound_sq=bound,
        weighted=special.weighted,
    )
    out.verify()
    return out
