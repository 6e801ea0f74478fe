"""The approximation chain: ring vectors, weighted morphisms, special
morphisms with witness transport.

Every output is self-certifying: the stated inequalities are re-verified
by exact arithmetic (rational, or rational plus a single square root
handled by cross-multiplication) before the result is returned, with all
multiplicative constants drawn from a ConstantLedger.

One deliberate normalization choice, recorded in the ledger: for weighted
morphisms the closeness conclusion is checked against phi/a (a the
weighted scale) rather than phi/|phi|.  The scale-normalized form is what
makes the exact section identity psi o i_r = [b] compatible with the
closeness bound; the witness-transport estimate is re-derived for it and
its constants are in the ledger.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import dirichlet
from .exact import ceil_sqrt, le_linear_sqrt, round_mul_sqrt, sqrt_lower, sqrt_upper
from .ledger import ConstantLedger
from .model import ModelPoint, apply_morphism, concat_points, divide
from .morphisms import (
    BlockMorphism,
    SpecialCertificate,
    WeightedCertificate,
    embedding_ir,
)
from .rings import ProductElement, ProductRingSpec, lambda_min_nonzero, norm_equivalence_constants


class ApproxError(ValueError):
    pass


class CertificationError(AssertionError):
    """An output failed its own re-verification; indicates a real bug."""


def derive_ledger(product: ProductRingSpec) -> ConstantLedger:
    """All ring-level constants the approximation chain draws on.

    Irrational inputs (norms of basis elements, square roots of eigenvalue
    bounds) enter through certified rational bounds in the valid direction.
    """
    led = ConstantLedger()
    c0s, c1s = zip(*(norm_equivalence_constants(f) for f in product.factors))
    c0_sq = min(c0s)
    c1_sq = sum(c1s, Fraction(0))
    lam_sq = min(lambda_min_nonzero(f).value_sq for f in product.factors)
    led.define("c0_sq", c0_sq, "least-eigenvalue lower bound of the block Gram form")
    led.define("c1_sq", c1_sq, "entry sum of |G| over all factors")
    led.define("lambda_sq", lam_sq, "least squared norm of a nonzero lattice element")

    tau_sum_up = Fraction(0)
    one_sq_max = Fraction(0)
    t2_terms: list[Fraction] = []
    for f in product.factors:
        basis = [f.basis_element(j) for j in range(f.rank)]
        for e in basis:
            tau_sum_up += sqrt_upper(e.norm_sq())
        one_sq_max = max(one_sq_max, f.gram[0][0])
        t2 = Fraction(0)
        for a in basis:
            for b in basis:
                t2 += sqrt_upper((a * b).norm_sq())
        t2_terms.append(t2)
    led.define("tau_sum_upper", tau_sum_up, "upper bound on sum of basis-element norms")
    led.define("one_norm_sq_max", max(one_sq_max, Fraction(1)),
               "largest squared norm of a factor identity (at least 1)")

    c_sub_sq = max(
        (t2 * t2) / (c0 * c0) for t2, c0 in zip(t2_terms, c0s)
    )
    led.define("c_sub_sq", c_sub_sq,
               "submultiplicativity: |e*c|^2 <= c_sub_sq |e|^2 |c|^2",
               t2="sum of basis-product norm bounds", c0_sq=str(c0_sq))

    from .rings import compute_Q0

    q0 = compute_Q0(product)
    led.define("Q0", Fraction(q0), "2*max(1, 1/c0, sum|tau|/lambda), certified ceiling")

    c0_low = sqrt_lower(c0_sq)
    c_a = tau_sum_up * (1 / c0_low + Fraction(1, q0))
    led.define("C_a_sq", c_a * c_a,
               "vector approximation upper constant: (sum|tau| (1/c0 + 1/Q0))^2")
    led.define("C_b_sq", Fraction(9, 4),
               "vector approximation lower constant: b <= (3/2)|b_bar| via the lambda step")
    led.define("C_c_sq", tau_sum_up * tau_sum_up,
               "direction-error constant: (sum|tau|)^2")
    return led


def op_constant_sq(ledger: ConstantLedger, ncols: int) -> Fraction:
    """h(phi(x)) <= op_constant_sq * |phi|^2 * h(x) for ncols source slots."""
    return ledger.value("c_sub_sq") * Fraction(max(ncols, 1)) ** 2


# -- vectors over the product ring ----------------------------------------


@dataclass(frozen=True)
class VectorApprox:
    denominator: int
    approximation: tuple[ProductElement, ...]
    bound: int  # exclusive bound Q**(n*t)
    checks: dict


def _product_inner(x: ProductElement, y: ProductElement) -> Fraction:
    total = Fraction(0)
    for xe, ye in zip(x.parts, y.parts):
        g = xe.ring.gram
        t = xe.ring.rank
        for i in range(t):
            if xe.coords[i] == 0:
                continue
            for j in range(t):
                if ye.coords[j] != 0:
                    total += xe.coords[i] * g[i][j] * ye.coords[j]
    return total


def approx_vector(
    product: ProductRingSpec,
    elements,
    q: int,
    ledger: ConstantLedger | None = None,
    budget: int = dirichlet.DEFAULT_BUDGET,
) -> VectorApprox:
    """Approximate the direction of a nonzero ring vector by b_bar / b.

    Scans denominators in increasing order; feasibility of each candidate
    is the per-coordinate Dirichlet bound for the target alpha/|a_bar|,
    decided exactly by cross-multiplied comparisons against sqrt(|a_bar|^2).
    Candidates whose rounded vector is zero are skipped (the lower
    comparability conclusion needs a nonzero approximation; with the
    normalized lattices configured here the guarantee is unaffected).
    """
    elements = list(elements)
    if ledger is None:
        ledger = derive_ledger(product)
    q0 = int(ledger.value("Q0"))
    if q < q0:
        raise ApproxError(f"modulus {q} below the ring threshold Q0={q0}")
    if not elements or all(e.is_zero() for e in elements):
        raise ApproxError("vector approximation needs a nontrivial vector")

    s = max(e.norm_sq() for e in elements)  # |a_bar|^2, rational
    t = product.rank
    n = len(elements)
    bound = q ** (n * t)
    if bound - 1 > budget:
        raise dirichlet.BudgetError(f"scan of {bound - 1} denominators exceeds budget {budget}")

    coords = [c for e in elements for c in e.coords()]
    tol_sq = s / Fraction(q * q)  # (sqrt(s)/Q)^2

    chosen = None
    for b in range(1, bound):
        betas = []
        ok = True
        for c in coords:
            beta = round_mul_sqrt(Fraction(c, 1) * b / s, s) if c else 0
            # |c*b - beta*sqrt(s)|^2 <= s/q^2, i.e.
            # c^2 b^2 + beta^2 s - s/q^2 <= 2 c b beta sqrt(s)
            u = c * c * b * b + Fraction(beta * beta) * s - tol_sq
            v = 2 * c * b * Fraction(beta)
            if not le_linear_sqrt(u, v, s):
                ok = False
                break
            betas.append(beta)
        if not ok:
            continue
        if all(x == 0 for x in betas):
            continue
        chosen = (b, betas)
        break
    if chosen is None:
        raise ApproxError("no feasible denominator with nonzero approximation below Q^(nt)")

    b, betas = chosen
    approx = []
    at = 0
    for _ in elements:
        approx.append(product.from_coords([Fraction(x) for x in betas[at : at + t]]))
        at += t

    # conclusion (ii): |b_bar|^2 <= C_a^2 b^2 and b^2 <= C_b^2 |b_bar|^2
    bbar_sq = max(e.norm_sq() for e in approx)
    c_a_sq = ledger.value("C_a_sq")
    c_b_sq = ledger.value("C_b_sq")
    if bbar_sq > c_a_sq * b * b:
        raise CertificationError("approximation norm exceeds the certified upper constant")
    if Fraction(b * b) > c_b_sq * bbar_sq:
        raise CertificationError("denominator exceeds the certified multiple of the norm")

    # conclusion (iii), cross-multiplied: per element,
    # ||a_k b - b_bar_k sqrt(s)||^2 <= C_c^2 s / q^2
    c_c_sq = ledger.value("C_c_sq")
    rhs = c_c_sq * s / Fraction(q * q)
    for a_k, b_k in zip(elements, approx):
        u = Fraction(b * b) * a_k.norm_sq() + s * b_k.norm_sq() - rhs
        v = 2 * b * _product_inner(a_k, b_k)
        if not le_linear_sqrt(u, v, s):
            raise CertificationError("direction error exceeds the certified constant")

    checks = {
        "denominator_bound": bound,
        "norm_sq": s,
        "upper_sq": c_a_sq,
        "lower_sq": c_b_sq,
        "direction_sq": c_c_sq,
    }
    return VectorApprox(denominator=b, approximation=tuple(approx), bound=bound, checks=checks)


# -- weighted morphisms -----------------------------------------------------


@dataclass(frozen=True)
class WeightedApprox:
    morphism: BlockMorphism
    denominator: int
    certificate: WeightedCertificate
    modulus: int
    exponent: int
    approximated: bool
    checks: dict


def _weighted_l_positions(phi: BlockMorphism, cert: WeightedCertificate):
    for i in range(len(phi.blocks)):
        selected = set(cert.columns[i])
        for r in range(phi.target[i]):
            for c in range(phi.source[i]):
                if c not in selected:
                    yield (i, r, c)


def approx_weighted(
    phi: BlockMorphism,
    cert: WeightedCertificate,
    q: int,
    ledger: ConstantLedger,
    budget: int = dirichlet.DEFAULT_BUDGET,
    exponent: int | None = None,
) -> WeightedApprox:
    """A weighted morphism psi with small norm close in direction to phi.

    The off-pattern entries are approximated relative to the weighted
    scale: the Dirichlet targets are the rational coordinate vectors of
    the entries divided by a, and the identity pattern of psi carries the
    Dirichlet denominator itself, so psi o i_r = [b] holds exactly.
    """
    cert.verify(phi)
    q0 = int(ledger.value("Q0"))
    if q < max(q0, 2):
        raise ApproxError(f"modulus {q} below the ring threshold Q0={q0}")
    t = phi.product.rank
    r_total = sum(phi.target)
    g_total = sum(phi.source)
    m = exponent if exponent is not None else t * (r_total * g_total - r_total**2 + 1)
    modulus = q**m
    a = cert.scale

    if phi.norm_sq() <= Fraction(modulus) ** 2 and a < modulus:
        checks = {"branch": "identity", "norm_sq": phi.norm_sq()}
        return WeightedApprox(
            morphism=phi,
            denominator=a,
            certificate=cert,
            modulus=modulus,
            exponent=m,
            approximated=False,
            checks=checks,
        )

    # the Dirichlet vector is (a, L entries) normalized by the scale a; its
    # first component is the identity of the product ring, coordinate 1 at
    # each factor's identity position, so its approximation at denominator
    # b is forced to b exactly and the rebuilt pattern is b * I
    positions = list(_weighted_l_positions(phi, cert))
    targets: list[Fraction] = []
    unit_len = 0
    for spec in phi.product.factors:
        targets.extend(spec.one().coords)
        unit_len += spec.rank
    for (i, r, c) in positions:
        targets.extend(Fraction(x, a) for x in phi.blocks[i][r][c].coords)
    result = dirichlet.dirichlet_approx(targets, q, budget=budget)
    b = result.denominator
    beta = list(result.numerators[unit_len:])
    at = 0
    for spec in phi.product.factors:
        unit_beta = result.numerators[at : at + spec.rank]
        if list(unit_beta) != [b] + [0] * (spec.rank - 1):
            raise CertificationError("identity slot did not round to the denominator")
        at += spec.rank

    if not (1 <= b < modulus):
        raise CertificationError("denominator escaped the certified range")

    blocks = [
        [[spec.zero() for _ in range(phi.source[i])] for _ in range(phi.target[i])]
        for i, spec in enumerate(phi.product.factors)
    ]
    for i in range(len(blocks)):
        for j, c in enumerate(cert.columns[i]):
            blocks[i][j][c] = phi.product.factors[i].integer(b)
    at = 0
    for (i, r, c) in positions:
        spec = phi.product.factors[i]
        blocks[i][r][c] = spec.element([Fraction(x) for x in beta[at : at + spec.rank]])
        at += spec.rank
    psi = BlockMorphism(phi.product, phi.source, phi.target, blocks)

    psi_cert = WeightedCertificate(
        scale=b,
        columns=cert.columns,
        slack_sq=max(Fraction(1), psi.norm_sq() / Fraction(b * b)),
    )
    psi_cert.verify(psi)

    # (ii) |psi|^2 <= C_psi^2 b^2 with the ledger formula
    c_w_up = sqrt_upper(cert.slack_sq)
    c0_low = sqrt_lower(ledger.value("c0_sq"))
    s_up = ledger.value("tau_sum_upper")
    c_psi = max(
        sqrt_upper(ledger.value("one_norm_sq_max")),
        s_up * (c_w_up / c0_low + Fraction(1, q0)),
    )
    c_psi_sq = c_psi * c_psi
    if psi.norm_sq() > c_psi_sq * b * b:
        raise CertificationError("approximated morphism norm exceeds its certified bound")

    # (iii), scale-normalized and cross-multiplied:
    # per entry, ||a*psi_e - b*phi_e||^2 <= C'^2 a^2 / q^2 with C' = sum|tau|
    c_prime_sq = ledger.value("C_c_sq")
    rhs = c_prime_sq * Fraction(a * a, q * q)
    for i, block in enumerate(psi.blocks):
        for r, row in enumerate(block):
            for c, e in enumerate(row):
                diff = e.scale(a) - phi.blocks[i][r][c].scale(b)
                if diff.norm_sq() > rhs:
                    raise CertificationError("direction error exceeds the certified constant")

    # (iv) exactness is re-checked through the actual composition
    ir = embedding_ir(psi, psi_cert)
    composed = psi.compose(ir)
    if composed != BlockMorphism.scalar(phi.product, phi.target, b):
        raise CertificationError("section identity psi o i_r = [b] failed")

    checks = {
        "branch": "approximated",
        "c_psi_sq": c_psi_sq,
        "c_prime_sq": c_prime_sq,
        "norm_sq": psi.norm_sq(),
    }
    return WeightedApprox(
        morphism=psi,
        denominator=b,
        certificate=psi_cert,
        modulus=modulus,
        exponent=m,
        approximated=True,
        checks=checks,
    )


# -- special morphisms and witness transport --------------------------------


@dataclass(frozen=True)
class SpecialApprox:
    morphism: BlockMorphism
    certificate: SpecialCertificate
    denominator: int
    q: int
    exponent: int
    modulus: int
    eps_prime_sq_cap: Fraction  # epsilon'^2 <= C_eps^2 * eps^2, this is the cap
    family_bound_sq: Fraction   # |psi_tilde|^2 <= family_bound_sq * M^2
    approximated: bool
    transform: Callable[[ModelPoint, ModelPoint, ModelPoint], tuple[ModelPoint, Fraction]]


def section_into_pair(psi_tilde: BlockMorphism, left_counts, cert: WeightedCertificate) -> BlockMorphism:
    """i_r followed by the inclusion of the left block of a pair morphism."""
    product = psi_tilde.product
    blocks = []
    for i, spec in enumerate(product.factors):
        gs_i = psi_tilde.source[i]
        r_i = psi_tilde.target[i]
        block = [[spec.zero() for _ in range(r_i)] for _ in range(gs_i)]
        for j, c in enumerate(cert.columns[i]):
            block[c][j] = spec.one()
        blocks.append(block)
    return BlockMorphism(product, psi_tilde.target, psi_tilde.source, blocks)


def approx_special(
    phi_tilde: BlockMorphism,
    cert: SpecialCertificate,
    eps_sq: Fraction,
    k0_sq: Fraction,
    p_height_sq: Fraction,
    ledger: ConstantLedger,
    budget: int = dirichlet.DEFAULT_BUDGET,
) -> SpecialApprox:
    """A bounded special morphism plus the transformer carrying witnesses
    from the input kernel to the output kernel.

    The modulus is Q = max(Q0, ceil((K0 + |p|)/eps)) computed on squares
    through (K0+|p|)^2 <= 2(K0^2+|p|^2); the morphism family emitted over
    any scenario is finite because |psi_tilde|^2 <= C^2 M^2 with M = Q^m.
    """
    if eps_sq <= 0:
        raise ApproxError("positive ball radius required")
    cert.verify(phi_tilde)
    q0 = int(ledger.value("Q0"))
    q = max(q0, ceil_sqrt(2 * (k0_sq + p_height_sq) / eps_sq), 2)

    t = phi_tilde.product.rank
    n_factors = phi_tilde.product.n_factors
    r_total = sum(phi_tilde.target)
    g_total = sum(cert.left_counts)
    s_total = sum(phi_tilde.source) - g_total
    m = t * (r_total * (g_total + s_total) - r_total**2 + n_factors)
    modulus = q**m

    c_w_sq = cert.weighted.slack_sq
    c_s_sq = cert.slack_sq
    c_op_sq = op_constant_sq(ledger, sum(phi_tilde.source))
    s_up_sq = ledger.value("C_c_sq")  # (sum|tau|)^2

    if phi_tilde.norm_sq() <= Fraction(modulus) ** 2:
        psi_tilde = phi_tilde
        out_cert = cert
        b = cert.weighted.scale
        approximated = False
        c_psi_sq = Fraction(1)
        family_bound_sq = Fraction(1)
    else:
        wide_cert = WeightedCertificate(
            scale=cert.weighted.scale,
            columns=cert.weighted.columns,
            slack_sq=max(Fraction(1), phi_tilde.norm_sq() / Fraction(cert.weighted.scale ** 2)),
        )
        wa = approx_weighted(phi_tilde, wide_cert, q, ledger, budget=budget, exponent=m)
        psi_tilde = wa.morphism
        b = wa.denominator
        psi_left, _ = psi_tilde.split_columns(cert.left_counts)
        left_cert = WeightedCertificate(
            scale=b,
            columns=cert.weighted.columns,
            slack_sq=max(Fraction(1), psi_left.norm_sq() / Fraction(b * b)),
        )
        out_cert = SpecialCertificate(
            left_counts=cert.left_counts,
            weighted=left_cert,
            slack_sq=max(Fraction(1), psi_tilde.norm_sq() / psi_left.norm_sq()),
        )
        out_cert.verify(psi_tilde)
        approximated = True
        c_psi_sq = wa.checks["c_psi_sq"]
        family_bound_sq = c_psi_sq

    if psi_tilde.norm_sq() > family_bound_sq * Fraction(modulus) ** 2:
        raise CertificationError("emitted morphism escapes the certified family bound")

    c_eps_sq = max(
        Fraction(1),
        c_op_sq * (s_up_sq + 2 * c_s_sq * c_w_sq) * c_psi_sq,
    )
    eps_prime_sq_cap = c_eps_sq * eps_sq

    section = section_into_pair(psi_tilde, cert.left_counts, out_cert.weighted)

    def transform(x: ModelPoint, p: ModelPoint, xi: ModelPoint) -> tuple[ModelPoint, Fraction]:
        pair = concat_points(x, p)
        if not apply_morphism(phi_tilde, pair + xi).is_zero():
            raise ApproxError("input witness equation does not hold")
        if xi.height() * Fraction(modulus) ** 2 > eps_sq:
            raise ApproxError("input perturbation is not inside the eps/M ball")
        if x.height() > k0_sq:
            raise ApproxError("witness point exceeds the configured height bound")
        if not approximated:
            if xi.height() * psi_tilde.norm_sq() > eps_prime_sq_cap:
                raise CertificationError("perturbation exceeds the certified radius")
            return xi, eps_prime_sq_cap
        image = apply_morphism(psi_tilde, pair)
        xi_second = divide(-image, b)
        xi_prime = apply_morphism(section, xi_second)
        if not apply_morphism(psi_tilde, pair + xi_prime).is_zero():
            raise CertificationError("transported witness equation failed")
        if xi_prime.height() * psi_tilde.norm_sq() > eps_prime_sq_cap:
            raise CertificationError("transported perturbation exceeds the certified radius")
        return xi_prime, eps_prime_sq_cap

    return SpecialApprox(
        morphism=psi_tilde,
        certificate=out_cert,
        denominator=b,
        q=q,
        exponent=m,
        modulus=modulus,
        eps_prime_sq_cap=eps_prime_sq_cap,
        family_bound_sq=family_bound_sq,
        approximated=approximated,
        transform=transform,
    )
