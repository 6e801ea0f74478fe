"""The end-to-end chain (weightify, specialize, bounded approximation,
threshold classification) over a scenario's witnesses, and the seeded
property suites for every module.

Reports are plain dicts of JSON-safe values with rationals as num/den
string pairs; two runs with the same scenario and seed produce identical
bytes.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import dirichlet
from .approx import (
    ApproxError,
    CertificationError,
    approx_special,
    approx_vector,
    approx_weighted,
    derive_ledger,
    op_constant_sq,
)
from .exact import le_linear_sqrt
from .geomnum import (
    GeomNumError,
    inflate_generators,
    morphism_lower_bound_check,
    point_lower_constants,
)
from .model import (
    ModelPoint,
    ModelSpace,
    apply_morphism,
    divide,
    torsion_enum,
)
from .morphisms import (
    AmbientSpec,
    BlockMorphism,
    MorphismError,
    embedding_ir,
    gauss_reduce,
    is_weighted,
    isogeny_extension,
    rank_and_codim,
    weightify,
)
from .reduction import (
    ConsistencyError,
    InclusionWitness,
    WitnessError,
    gamma_embed,
    point_project,
    specialize,
)
from .rings import (
    ProductRingSpec,
    RingSpec,
    lambda_min_nonzero,
    norm_equivalence_constants,
)
from .scenario import (
    REPORT_SCHEMA,
    Scenario,
    morphism_to_json,
    point_to_json,
    rat_to_json,
    witness_to_json,
)
from .thresholds import ThresholdError, finiteness_thresholds, kernel_degree

PipelineErrors = (
    ApproxError,
    CertificationError,
    ConsistencyError,
    GeomNumError,
    MorphismError,
    ThresholdError,
    WitnessError,
    dirichlet.BudgetError,
)


# -- the proof chain ---------------------------------------------------------


def run_pipeline(scenario: Scenario) -> dict:
    ledger = derive_ledger(scenario.product)
    gamma, inflation = inflate_generators(scenario.gamma, scenario.k0_sq, scenario.k0_sq)
    p_point = gamma.point
    p_height = p_point.height()
    moduli = _moduli_table(scenario, ledger, p_height)

    family: dict = {}
    rows = []
    ok = True
    for name, witness in scenario.witnesses():
        row = {"witness": name, "stages": []}
        try:
            row["stages"].append({"stage": "input", "checked": _checked(witness)})

            cert = witness.weighted or is_weighted(witness.morphism)
            if cert is None:
                delta, phi_w, cert = weightify(witness.morphism, scenario.ambient)
                witness = InclusionWitness(
                    morphism=phi_w,
                    x=witness.x,
                    xi=witness.xi,
                    xi_bound_sq=witness.xi_bound_sq,
                    y=witness.y,
                    weighted=cert,
                )
                witness.verify()
                row["stages"].append(
                    {"stage": "weightify", "scale": cert.scale,
                     "morphism": morphism_to_json(phi_w)}
                )
            else:
                witness = InclusionWitness(
                    morphism=witness.morphism,
                    x=witness.x,
                    xi=witness.xi,
                    xi_bound_sq=witness.xi_bound_sq,
                    y=witness.y,
                    weighted=cert,
                )
                row["stages"].append({"stage": "weighted", "scale": cert.scale})

            pair = specialize(witness, gamma, scenario.k0_sq, ledger)
            row["stages"].append(
                {"stage": "specialize", "N": pair.group_data[0],
                 "morphism": morphism_to_json(pair.morphism)}
            )

            sa = approx_special(
                pair.morphism,
                pair.special,
                scenario.eps_sq,
                scenario.k0_sq,
                p_height,
                ledger,
                budget=scenario.budget,
            )
            xi_prime, cap = sa.transform(pair.x, p_point, pair.xi)
            transported = InclusionWitness(
                morphism=sa.morphism,
                x=pair.x,
                p=p_point,
                xi=xi_prime,
                xi_bound_sq=(cap / sa.morphism.norm_sq()) if sa.morphism.norm_sq() else Fraction(0),
                weighted=sa.certificate.weighted,
                special=sa.certificate,
            )
            transported.verify()
            row["stages"].append(
                {
                    "stage": "approx_special",
                    "Q": sa.q,
                    "m": sa.exponent,
                    "M": sa.modulus,
                    "approximated": sa.approximated,
                    "denominator": sa.denominator,
                    "norm_sq": rat_to_json(sa.morphism.norm_sq()),
                    "family_bound_sq": rat_to_json(sa.family_bound_sq * Fraction(sa.modulus) ** 2),
                    "c_eps_sq": rat_to_json(cap / scenario.eps_sq),
                    "eps_prime_sq_cap": rat_to_json(cap),
                    "witness": witness_to_json(transported),
                }
            )
            key = (sa.morphism.coords_key(), sa.morphism.source, sa.morphism.target)
            entry = family.setdefault(
                key,
                {
                    "norm_sq": sa.morphism.norm_sq(),
                    "bound_sq": sa.family_bound_sq * Fraction(sa.modulus) ** 2,
                },
            )
            if sa.morphism.norm_sq() > entry["bound_sq"]:
                raise CertificationError("family norm bound violated")

            psi_left, _ = sa.morphism.split_columns(pair.special.left_counts)
            _, codim = rank_and_codim(psi_left, scenario.ambient)
            if scenario.card and scenario.oracle and scenario.targets:
                if codim < scenario.card.dim_d + 1:
                    raise ThresholdError(
                        f"codimension {codim} below dim V + 1 = {scenario.card.dim_d + 1}"
                    )
                thr = finiteness_thresholds(
                    scenario.card,
                    scenario.oracle,
                    scenario.eta,
                    scenario.k0_sq,
                    scenario.ambient.total,
                    scenario.targets,
                )
                case = thr.classify(psi_left.norm_sq())
                row["stages"].append(
                    {
                        "stage": "threshold",
                        "codim": codim,
                        "m_upper": rat_to_json(thr.m_upper),
                        "eps1_star_sq": rat_to_json(thr.eps1_star_sq),
                        "case": case.case,
                        "at_boundary": case.at_boundary,
                        "ball_radius_sq": rat_to_json(case.ball_radius_sq),
                    }
                )
            row["ok"] = True
        except PipelineErrors as err:
            row["ok"] = False
            row["diagnostic"] = f"{type(err).__name__}: {err}"
            ok = False
        rows.append(row)

    family_report = {
        "distinct": len(family),
        "max_norm_sq": rat_to_json(
            max((e["norm_sq"] for e in family.values()), default=Fraction(0))
        ),
        "bound_sq": rat_to_json(
            max((e["bound_sq"] for e in family.values()), default=Fraction(0))
        ),
    }
    return {
        "schema": REPORT_SCHEMA,
        "kind": "pipeline",
        "scenario": scenario.name,
        "seed": scenario.seed,
        "gamma_inflation": inflation,
        "gamma": point_to_json(gamma.point),
        "p_height_sq": rat_to_json(p_height),
        "moduli": moduli,
        "ledger": ledger.to_jsonable(),
        "witnesses": rows,
        "family": family_report,
        "ok": ok,
    }


def _moduli_table(scenario: Scenario, ledger, p_height: Fraction) -> list[dict]:
    """Q and M = Q^m for every admissible target rank, independent of the
    witness list (the bounded-family modulus exists before any witness)."""
    from itertools import product as iproduct

    from .exact import ceil_sqrt

    q0 = int(ledger.value("Q0"))
    q = max(q0, ceil_sqrt(2 * (scenario.k0_sq + p_height) / scenario.eps_sq), 2)
    t = scenario.product.rank
    n_factors = scenario.product.n_factors
    g_total = scenario.ambient.total
    s_total = scenario.gamma.space.ambient.total
    table = []
    ranges = [range(0, c + 1) for c in scenario.ambient.counts]
    for target in iproduct(*ranges):
        r_total = sum(target)
        if r_total == 0:
            continue
        m = t * (r_total * (g_total + s_total) - r_total**2 + n_factors)
        table.append({"target": list(target), "Q": q, "m": m, "M": q**m})
    return table


def _checked(w: InclusionWitness) -> bool:
    w.verify()
    return True


# -- random data for the suites ---------------------------------------------


def _rand_coords(rng: random.Random, rank: int, limit: int) -> list[int]:
    return [rng.randint(-limit, limit) for _ in range(rank)]


def _rand_element(rng, spec: RingSpec, limit: int = 9):
    return spec.element(_rand_coords(rng, spec.rank, limit))


def _rand_nonzero(rng, spec: RingSpec, limit: int = 9):
    while True:
        e = _rand_element(rng, spec, limit)
        if not e.is_zero():
            return e


def _rand_full_rank(rng, spec: RingSpec, n: int, limit: int = 4):
    from .linalg import det
    from .morphisms import rationalize_block

    while True:
        block = [[_rand_element(rng, spec, limit) for _ in range(n)] for _ in range(n)]
        if det(rationalize_block(spec, block)) != 0:
            return block


def _rand_point(rng, space: ModelSpace, limit: int = 3, torsion_den: int = 4) -> ModelPoint:
    slots = []
    for i, spec in enumerate(space.product.factors):
        fac = []
        for _ in range(space.counts[i]):
            torsion = [
                Fraction(rng.randrange(torsion_den), torsion_den)
                for _ in range(2 * spec.dimension)
            ]
            free = [
                [Fraction(rng.randint(-limit, limit)) for _ in range(spec.rank)]
                for _ in range(space.free_ranks[i])
            ]
            fac.append(space.slot(i, torsion=torsion, free=free))
        slots.append(fac)
    return space.point(slots)


def _suite(name: str, trials: int, failures: list[str]) -> dict:
    return {
        "suite": name,
        "trials": trials,
        "failures": len(failures),
        "first_failures": failures[:5],
    }


# -- module suites -----------------------------------------------------------


def suite_rings(product: ProductRingSpec, trials: int, rng: random.Random) -> dict:
    failures: list[str] = []
    count = 0
    for spec in product.factors:
        c0_sq, c1_sq = norm_equivalence_constants(spec)
        lam = lambda_min_nonzero(spec)
        if lam.witness.norm_sq() != lam.value_sq:
            failures.append(f"{spec.tag}: lambda witness does not attain the minimum")
        for _ in range(trials):
            count += 1
            a = _rand_element(rng, spec)
            sup = a.sup_coord()
            n = a.norm_sq()
            if not (c0_sq * sup * sup <= n <= c1_sq * sup * sup):
                failures.append(f"{spec.tag}: norm equivalence failed at {a.coords}")
                continue
            if a.conj().norm_sq() != n:
                failures.append(f"{spec.tag}: involution changed the norm at {a.coords}")
                continue
            b = _rand_element(rng, spec)
            from .linalg import mat_mul

            if mat_mul(spec.rho(a), spec.rho(b)) != spec.rho(a * b):
                failures.append(f"{spec.tag}: lattice representation broke on a product")
    return _suite("rings", count, failures)


def suite_morphisms(product: ProductRingSpec, trials: int, rng: random.Random) -> dict:
    failures: list[str] = []
    count = 0
    for spec in product.factors:
        for _ in range(trials):
            count += 1
            n = rng.randint(1, 3)
            block = _rand_full_rank(rng, spec, n)
            try:
                reduced, a = gauss_reduce(spec, block)
            except MorphismError as err:
                failures.append(f"{spec.tag}: gauss failed: {err}")
                continue
            # identity check is internal to gauss_reduce; re-check the scale
            if a < 1:
                failures.append(f"{spec.tag}: non-positive scale")
    # embedding + extension identities on random weighted morphisms
    for _ in range(trials):
        count += 1
        single = ProductRingSpec((product.factors[0],))
        spec = single.factors[0]
        g, r = 2, 1
        a = rng.randint(1, 6)
        l_entry = _rand_element(rng, spec, 5)
        phi = BlockMorphism(
            single, (g,), (r,), [[[spec.integer(a), l_entry]]]
        )
        cert = is_weighted(phi)
        if cert is None:
            failures.append("weighted pattern not found on (aI|L)")
            continue
        ir = embedding_ir(phi, cert)
        if phi.compose(ir) != BlockMorphism.scalar(single, (r,), cert.scale):
            failures.append("embedding identity failed")
            continue
        ext = isogeny_extension(phi, cert)
        top = BlockMorphism(single, ext.source, phi.target, [ext.blocks[0][:r]])
        if top != phi:
            failures.append("extension does not preserve the first rows")
    return _suite("morphisms", count, failures)


def suite_weightify_torsion(
    scenario: Scenario, trials: int, rng: random.Random, torsion_level: int = 4
) -> dict:
    """Kernel inclusion through weightify, checked by torsion enumeration."""
    failures: list[str] = []
    count = 0
    space = scenario.space
    hom_dim = sum(
        2 * spec.dimension * c
        for spec, c in zip(space.product.factors, space.counts)
    )
    if torsion_level**hom_dim > scenario.torsion_budget:
        return _suite("weightify_torsion", 0, [])
    targets = tuple(min(c, 1) for c in space.counts)
    for _ in range(trials):
        count += 1
        blocks = []
        for i, spec in enumerate(space.product.factors):
            rows = []
            for _ in range(targets[i]):
                rows.append([_rand_element(rng, spec, 3) for _ in range(space.counts[i])])
            blocks.append(rows)
        psi = BlockMorphism(space.product, space.counts, targets, blocks)
        try:
            ranks, _ = rank_and_codim(psi, scenario.ambient)
            if ranks != targets:
                continue
            delta, phi, cert = weightify(psi, scenario.ambient)
        except MorphismError:
            continue
        for level in range(1, torsion_level + 1):
            for z in torsion_enum(space, level, budget=scenario.torsion_budget):
                if apply_morphism(psi, z).is_zero() and not apply_morphism(phi, z).is_zero():
                    failures.append(f"kernel escaped at torsion level {level}")
                    break
    return _suite("weightify_torsion", count, failures)


def suite_model(scenario: Scenario, trials: int, rng: random.Random) -> dict:
    failures: list[str] = []
    space = scenario.space
    ledger = derive_ledger(scenario.product)
    count = 0
    for _ in range(trials):
        count += 1
        x = _rand_point(rng, space)
        y = _rand_point(rng, space)
        z = _rand_point(rng, space)
        if (x + y) + z != x + (y + z) or x + y != y + x or not (x - x).is_zero():
            failures.append("group law failed")
            continue
        hx, hy, hxy = x.height(), y.height(), (x + y).height()
        # h(x+y) <= h(x) + h(y) + 2 sqrt(h(x) h(y)), decided exactly
        if not le_linear_sqrt(hxy - hx - hy, Fraction(2), hx * hy):
            failures.append("height triangle inequality failed")
            continue
        n = rng.randint(1, 5)
        if x.int_mul(n).height() != Fraction(n * n) * hx:
            failures.append("height homogeneity failed")
            continue
        b = rng.randint(1, 5)
        if divide(x, b).int_mul(b) != x:
            failures.append("divide/multiply identity failed")
            continue
        blocks = []
        targets = tuple(min(c, 1) for c in space.counts)
        for i, spec in enumerate(space.product.factors):
            rows = []
            for _ in range(targets[i]):
                rows.append([_rand_element(rng, spec, 3) for _ in range(space.counts[i])])
            blocks.append(rows)
        phi = BlockMorphism(space.product, space.counts, targets, blocks)
        if apply_morphism(phi, x + y) != apply_morphism(phi, x) + apply_morphism(phi, y):
            failures.append("morphism additivity failed")
            continue
        image_h = apply_morphism(phi, x).height()
        if hx == 0:
            if image_h != 0:
                failures.append("torsion points must map to torsion")
        else:
            c_op_sq = op_constant_sq(ledger, sum(space.counts))
            if image_h > c_op_sq * phi.norm_sq() * hx:
                failures.append("operator height bound failed")
    return _suite("model", count, failures)


def suite_dirichlet(trials: int, rng: random.Random, budget: int) -> dict:
    failures: list[str] = []
    count = 0
    for _ in range(trials):
        count += 1
        m = rng.randint(1, 3)
        q = rng.randint(2, 8)
        alpha = [
            Fraction(rng.randint(-300, 300), rng.randint(1, 100)) for _ in range(m)
        ]
        try:
            res = dirichlet.dirichlet_approx(alpha, q, budget=budget)
        except dirichlet.BudgetError:
            continue
        if not (1 <= res.denominator < q**m) or res.error > Fraction(1, q):
            failures.append(f"contract failed at alpha={alpha} q={q}")
            continue
        table = dirichlet.feasibility_oracle(alpha, q, budget=budget)
        feasible = [b for b, err in table if err <= Fraction(1, q)]
        if not feasible or res.denominator != feasible[0]:
            failures.append(f"not the minimal feasible denominator at alpha={alpha} q={q}")
    return _suite("dirichlet", count, failures)


def suite_approx(product: ProductRingSpec, trials: int, rng: random.Random, budget: int) -> dict:
    failures: list[str] = []
    ledger = derive_ledger(product)
    q0 = int(ledger.value("Q0"))
    count = 0
    for _ in range(trials):
        count += 1
        n = rng.randint(1, 2) if product.rank <= 2 else 1
        vec = []
        for _ in range(n):
            coords = _rand_coords(rng, product.rank, 9)
            vec.append(product.from_coords([Fraction(c) for c in coords]))
        if all(e.is_zero() for e in vec):
            continue
        q = q0 + rng.randint(0, 3)
        try:
            approx_vector(product, vec, q, ledger=ledger, budget=budget)
        except dirichlet.BudgetError:
            continue
        except (ApproxError, CertificationError) as err:
            failures.append(f"vector approx failed: {err}")
    single = ProductRingSpec((product.factors[0],))
    led1 = derive_ledger(single)
    q0_1 = int(led1.value("Q0"))
    spec = single.factors[0]
    for _ in range(trials):
        count += 1
        a = rng.randint(1, 50)
        l_entry = _rand_element(rng, spec, 50)
        phi = BlockMorphism(single, (2,), (1,), [[[spec.integer(a), l_entry]]])
        cert = is_weighted(phi)
        q = q0_1 + rng.randint(0, 3)
        try:
            wa = approx_weighted(phi, cert, q, led1, budget=budget, exponent=2)
        except dirichlet.BudgetError:
            continue
        except (ApproxError, CertificationError) as err:
            failures.append(f"weighted approx failed: {err}")
            continue
        ir = embedding_ir(wa.morphism, wa.certificate)
        if wa.morphism.compose(ir) != BlockMorphism.scalar(single, (1,), wa.denominator):
            failures.append("psi o i_r != [b]")
    return _suite("approx", count, failures)


def suite_geomnum(scenario: Scenario, trials: int, rng: random.Random) -> dict:
    """Falsification search for the certified point constants."""
    failures: list[str] = []
    gamma = scenario.gamma
    count = 0
    if gamma.point.space.ambient.total == 0:
        return _suite("geomnum", 0, [])
    for i, spec in enumerate(gamma.point.space.product.factors):
        s_i = len(gamma.point.slots[i])
        if s_i == 0:
            continue
        consts = point_lower_constants(gamma.point, i)
        space_s = gamma.space
        for _ in range(trials):
            count += 1
            row = [_rand_element(rng, spec, 20) for _ in range(s_i)]
            if all(e.is_zero() for e in row):
                continue
            # xi on a rational grid inside the eps0 ball
            xi_slots: list = [[] for _ in space_s.counts]
            den = rng.randint(2, 6)
            for k, spec2 in enumerate(space_s.product.factors):
                for _ in range(space_s.counts[k]):
                    free = []
                    for _ in range(space_s.free_ranks[k]):
                        coeff = [Fraction(0)] * spec2.rank
                        coeff[rng.randrange(spec2.rank)] = Fraction(
                            rng.randint(-den, den), den * den
                        )
                        free.append(coeff)
                    xi_slots[k].append(space_s.slot(k, free=free))
            xi = space_s.point(xi_slots)
            if any(
                xi.slot_height(k, j) > consts.eps0_sq
                for k in range(len(space_s.counts))
                for j in range(space_s.counts[k])
            ):
                continue
            try:
                ok = morphism_lower_bound_check(gamma.point, i, row, xi, consts)
            except GeomNumError:
                continue
            if not ok:
                failures.append(f"factor {i}: lower bound violated at {[e.coords for e in row]}")
    return _suite("geomnum", count, failures)


def suite_thresholds(scenario: Scenario) -> dict:
    failures: list[str] = []
    count = 0
    # kernel degree against torsion enumeration on a dimension-1 factor
    for spec, g_i in zip(scenario.product.factors, scenario.space.counts):
        if spec.dimension != 1 or g_i < 1:
            continue
        single = ProductRingSpec((spec,))
        amb = AmbientSpec(single, (1,))
        sp = ModelSpace(amb, (1,))
        for a in (1, 2, 3):
            count += 1
            expected = kernel_degree(a, (1,), (1,))
            seen = sum(
                1
                for z in torsion_enum(sp, a, budget=scenario.torsion_budget)
                if apply_morphism(BlockMorphism.scalar(single, (1,), a), z).is_zero()
            )
            if expected != seen:
                failures.append(f"kernel degree {expected} != enumerated {seen} at a={a}")
        break
    if scenario.card and scenario.oracle and scenario.targets:
        count += 1
        try:
            thr = finiteness_thresholds(
                scenario.card,
                scenario.oracle,
                scenario.eta,
                scenario.k0_sq,
                scenario.ambient.total,
                scenario.targets,
            )
            boundary = thr.m_upper * thr.m_upper
            case = thr.classify(boundary)
            if not case.at_boundary:
                failures.append("boundary classification missed")
            if thr.eps1_star_sq <= 0 or thr.m_upper < 1:
                failures.append("degenerate thresholds")
        except ThresholdError as err:
            failures.append(f"thresholds failed: {err}")
    return _suite("thresholds", count, failures)


def suite_reduction(scenario: Scenario, rng: random.Random) -> dict:
    failures: list[str] = []
    ledger = derive_ledger(scenario.product)
    count = 0
    embedded = {}
    for name, w in scenario.witnesses():
        count += 1
        try:
            pw = gamma_embed(w, scenario.gamma, scenario.k0_sq, scenario.ambient, ledger)
            pw.verify()
            embedded[name] = (w, pw)
        except PipelineErrors as err:
            failures.append(f"{name}: embed failed: {err}")
    keys = list(embedded)
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            wi, pi = embedded[keys[i]]
            wj, pj = embedded[keys[j]]
            if wi.x != wj.x and pi.x == pj.x:
                failures.append(f"injectivity broken between {keys[i]} and {keys[j]}")
    for name, (w, pw) in embedded.items():
        if w.xi_bound_sq != 0 or not pw.xi.is_torsion():
            continue
        count += 1
        try:
            back = point_project(pw, scenario.k0_sq, scenario.ambient, ledger)
            if back.x != w.x:
                failures.append(f"{name}: round trip changed the point")
            elif not back.xi.is_torsion():
                failures.append(f"{name}: round trip produced a non-torsion perturbation")
        except PipelineErrors as err:
            failures.append(f"{name}: projection failed: {err}")
    return _suite("reduction", count, failures)


def run_property_suites(scenario: Scenario, seed: int | None = None, trials: int = 60) -> dict:
    rng = random.Random(scenario.seed if seed is None else seed)
    suites = [
        suite_rings(scenario.product, trials, rng),
        suite_morphisms(scenario.product, max(trials // 2, 5), rng),
        suite_weightify_torsion(scenario, max(trials // 10, 3), rng),
        suite_model(scenario, trials, rng),
        suite_dirichlet(max(trials // 2, 5), rng, scenario.budget),
        suite_approx(scenario.product, max(trials // 4, 5), rng, scenario.budget),
        suite_geomnum(scenario, trials, rng),
        suite_thresholds(scenario),
        suite_reduction(scenario, rng),
    ]
    ok = all(s["failures"] == 0 for s in suites)
    return {
        "schema": REPORT_SCHEMA,
        "kind": "verify",
        "scenario": scenario.name,
        "seed": scenario.seed if seed is None else seed,
        "suites": suites,
        "ok": ok,
    }
