"""The transfer homomorphism T_{G/H}: G -> H/[H,H] and the closed forms it
satisfies on two-step nilpotent groups.

For abelian H the quotient by [H,H] is trivial and transfer values are
reported as elements of H itself, so the power-map identities below are
plain element equalities. The correcting function phi records the
central order-<=2 defect between T(g) and g^d.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import abelian
from .errors import PreconditionFailed
from .group_core import FiniteGroup, Subgroup


def _math_check(condition: bool, message: str) -> None:
    # A failure here is a falsified mathematical identity, not bad input.
    if not condition:
        raise AssertionError(message)


@dataclass
class CheckReport:
    """Structured outcome of one verified identity."""

    check: str
    passed: bool
    counterexamples: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "pass": self.passed,
            "counterexamples": self.counterexamples,
            "stats": self.stats,
        }


def is_two_step_nilpotent(group: FiniteGroup) -> bool:
    """True iff [G, [G, G]] = {e}, i.e. commutators are central."""
    e = group.identity_id
    derived = group.commutator_subgroup()
    return all(
        group.commutator(c, g) == e for c in derived.members for g in group.elements()
    )


def central_involutions(group: FiniteGroup) -> set[int]:
    """Central elements of order at most 2."""
    return {x for x in group.center().members if group.mul(x, x) == group.identity_id}


def squares_commutators_subgroup(group: FiniteGroup) -> Subgroup:
    """The subgroup G^2 [G,G], generated by all squares and commutators."""
    gens = {group.mul(g, g) for g in group.elements()}
    gens.update(group.commutator_subgroup().members)
    return group.subgroup_generated(gens)


def coabelian_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """All subgroups between [G,G] and G (each is automatically normal)."""
    derived = group.commutator_subgroup()
    ab_group, proj = group.abelianization
    return [proj.preimage(sub.members) for sub in ab_group.all_subgroups()]


def transfer_instances(group: FiniteGroup) -> list[Subgroup]:
    """Abelian normal H with abelian quotient: the power-rule candidates."""
    return [h for h in coabelian_subgroups(group) if h.is_abelian]


# -- the transfer map itself ---------------------------------------------------


def transfer_product(group: FiniteGroup, sub: Subgroup, g: int) -> int:
    """Product of the transversal factors, in canonical transversal order.

    Well-defined only modulo [H,H]; exact for abelian H.
    """
    transversal, pos = group.coset_positions(sub)
    result = group.identity_id
    for t in transversal:
        x = group.mul(g, t)
        s = transversal[pos[x]]
        result = group.mul(result, group.mul(group.inv(s), x))
    return result


def _derived_members(group: FiniteGroup, sub: Subgroup) -> tuple[int, ...]:
    gens = {group.commutator(x, y) for x in sub.members for y in sub.members}
    return group.subgroup_generated(gens).members


def _coset_min(group: FiniteGroup, x: int, derived: tuple[int, ...]) -> int:
    return min(group.mul(x, d) for d in derived)


def transfer(group: FiniteGroup, sub: Subgroup, g: int) -> int:
    """Transfer value as a canonical element id.

    For abelian H this is the exact factor product in H; otherwise the
    minimal id in the product's [H,H]-coset.
    """
    result = transfer_product(group, sub, g)
    if sub.is_abelian:
        return result
    return _coset_min(group, result, _derived_members(group, sub))


@dataclass(frozen=True)
class TransferMap:
    """Total transfer table of one subgroup.

    ``values[g]`` is an element id of H when H is abelian; otherwise an
    element id of the standalone quotient group H/[H,H] stored in
    ``codomain`` (with ``to_codomain`` mapping parent ids of H into it).
    """

    group: FiniteGroup
    subgroup: Subgroup
    transversal: tuple[int, ...]
    values: tuple[int, ...]
    codomain: FiniteGroup | None = None
    to_codomain: dict[int, int] | None = None

    def value_order(self, g: int) -> int:
        grp = self.codomain if self.codomain is not None else self.group
        return grp.element_order(self.values[g])


def transfer_table(group: FiniteGroup, sub: Subgroup) -> TransferMap:
    """Compute all transfer values and verify the homomorphism property."""
    transversal, _ = group.coset_positions(sub)
    raw = [transfer_product(group, sub, g) for g in group.elements()]
    if sub.is_abelian:
        values = tuple(raw)
        codomain = None
        to_codomain = None
        _check_hom(group._np_table, np.array(values), group._np_table)
    else:
        hgrp, to_parent = sub.as_group
        local = {m: i for i, m in enumerate(to_parent)}
        quot, proj = hgrp.quotient(hgrp.commutator_subgroup())
        to_codomain = {m: proj(local[m]) for m in sub.members}
        values = tuple(to_codomain[v] for v in raw)
        codomain = quot
        _check_hom(group._np_table, np.array(values), quot._np_table)
    return TransferMap(group, sub, tuple(transversal), values, codomain, to_codomain)


def _check_hom(src_table: np.ndarray, values: np.ndarray, dst_table: np.ndarray) -> None:
    lhs = values[src_table]
    rhs = dst_table[np.ix_(values, values)]
    _math_check(
        np.array_equal(lhs, rhs), "transfer values do not form a homomorphism"
    )


def transfer_values_with_transversal(
    group: FiniteGroup, sub: Subgroup, transversal
) -> list[int]:
    """Transfer values computed against an explicit transversal (canonicalized).

    Used to confirm independence of the transversal choice.
    """
    _, pos = group.coset_positions(sub)
    transversal = list(transversal)
    covered = sorted(pos[t] for t in transversal)
    if covered != list(range(len(transversal))) or len(transversal) != sub.index():
        raise PreconditionFailed("not a left transversal: one representative per coset required")
    by_coset = {pos[t]: t for t in transversal}
    derived = None if sub.is_abelian else _derived_members(group, sub)
    out = []
    for g in group.elements():
        result = group.identity_id
        for t in transversal:
            x = group.mul(g, t)
            s = by_coset[pos[x]]
            result = group.mul(result, group.mul(group.inv(s), x))
        out.append(result if derived is None else _coset_min(group, result, derived))
    return out


def transversal_independence_check(
    group: FiniteGroup, sub: Subgroup, *, trials: int = 10, seed: int = 0
) -> CheckReport:
    """Recompute transfer with randomly H-shifted transversals; values must agree."""
    base_t, _ = group.coset_positions(sub)
    derived = None if sub.is_abelian else _derived_members(group, sub)
    reference = [
        transfer_product(group, sub, g) if derived is None
        else _coset_min(group, transfer_product(group, sub, g), derived)
        for g in group.elements()
    ]
    rng = random.Random(seed)
    report = CheckReport(
        "transversal_independence",
        True,
        stats={"group": group.label, "subgroup_order": len(sub), "trials": trials},
    )
    for trial in range(trials):
        shifted = [group.mul(t, rng.choice(sub.members)) for t in base_t]
        values = transfer_values_with_transversal(group, sub, shifted)
        for g, (got, want) in enumerate(zip(values, reference)):
            if got != want:
                report.passed = False
                report.counterexamples.append(
                    {"g": g, "lhs": got, "rhs": want, "trial": trial}
                )
    return report


# -- closed forms on two-step nilpotent groups ---------------------------------


def _power_rule_preconditions(group: FiniteGroup, sub: Subgroup, *, need_odd: bool) -> int:
    """Validate the shared hypotheses, returning the index d."""
    if not sub.is_abelian:
        raise PreconditionFailed("(1) H is not abelian")
    if not sub.contains_subgroup(group.commutator_subgroup()):
        raise PreconditionFailed("(2) G/H is not a group: [G,G] is not inside H")
    d = sub.index()
    if need_odd and d % 2 == 0:
        raise PreconditionFailed(f"(2) G/H must have odd order, got d={d}")
    if not is_two_step_nilpotent(group):
        raise PreconditionFailed("(3) [G,[G,G]] is not trivial")
    return d


def check_odd_index_transfer(group: FiniteGroup, sub: Subgroup) -> CheckReport:
    """For abelian normal H of odd index d in a two-step nilpotent group,
    the transfer is the d-th power map; consequently [G,G]^d = {e} and
    G^d is central."""
    d = _power_rule_preconditions(group, sub, need_odd=True)
    report = CheckReport(
        "odd_index_transfer_power_rule",
        True,
        stats={"group": group.label, "index": d, "universe": group.order},
    )
    for g in group.elements():
        lhs = transfer(group, sub, g)
        rhs = group.pow(g, d)
        if lhs != rhs:
            report.passed = False
            report.counterexamples.append({"g": g, "lhs": lhs, "rhs": rhs})
    e = group.identity_id
    for x in group.commutator_subgroup().members:
        if group.pow(x, d) != e:
            report.passed = False
            report.counterexamples.append({"g": x, "lhs": group.pow(x, d), "rhs": e})
    central = set(group.center().members)
    for x in group.power_subgroup(d).members:
        if x not in central:
            report.passed = False
            report.counterexamples.append({"g": x, "lhs": x, "rhs": -1})
    return report


@dataclass(frozen=True)
class CorrectingFunction:
    """phi(g) = T(g) * (g^d)^-1: central involutions constant on
    cosets of G^2 [G,G]."""

    group: FiniteGroup
    subgroup: Subgroup
    values: tuple[int, ...]
    index: int
    factors: tuple[int, ...]
    generator_lifts: tuple[int, ...]
    alpha_lift: int
    alpha_lifts: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.values[g]


def correcting_function(group: FiniteGroup, sub: Subgroup) -> CorrectingFunction:
    """Compute phi for an abelian normal H with abelian quotient in a
    two-step nilpotent group, verifying every structural property:

    * values are central of order at most 2 and constant on G^2[G,G]-cosets;
    * the generator formulas T(t_i) = t_i^d [t_i^{m_i}, alpha_i] and
      T(h) = h^d [h, alpha] hold, where alpha_i and alpha are the products
      over the complement of <t_i> in G/H and over all of G/H;
    * the unique decomposition g = t_1^{a_1} ... t_s^{a_s} h multiplies
      the transfer values accordingly.
    """
    d = _power_rule_preconditions(group, sub, need_odd=False)
    tmap = transfer_table(group, sub)
    e = group.identity_id

    phi = tuple(
        group.mul(tmap.values[g], group.inv(group.pow(g, d))) for g in group.elements()
    )
    z2 = central_involutions(group)
    for g, v in enumerate(phi):
        _math_check(v in z2, f"phi({g})={v} is not a central involution")

    squares = squares_commutators_subgroup(group)
    _, pos = group.coset_positions(squares)
    by_coset: dict[int, int] = {}
    for g, v in enumerate(phi):
        seen = by_coset.setdefault(pos[g], v)
        _math_check(seen == v, f"phi is not constant on the G^2[G,G]-coset of {g}")

    quot, proj = group.quotient(sub)
    dec = abelian.decompose(quot)
    reps = quot.coset_reps
    lifts = tuple(reps[t] for t in dec.generators)

    # alpha = product over all of G/H; alpha_i = product over the complement of <t_i>
    alpha_lift = reps[abelian.miller_product(quot)]
    alpha_lifts = []
    for i in range(len(dec.factors)):
        others = [t for j, t in enumerate(dec.generators) if j != i]
        complement = quot.subgroup_generated(others)
        alpha_i = abelian.subgroup_product(quot, complement.members)
        alpha_lifts.append(reps[alpha_i])

    for i, (m, t, a_i) in enumerate(zip(dec.factors, lifts, alpha_lifts)):
        want = group.mul(group.pow(t, d), group.commutator(group.pow(t, m), a_i))
        _math_check(
            tmap.values[t] == want,
            f"generator formula fails at t_{i} (element {t})",
        )
    for h in sub.members:
        want = group.mul(group.pow(h, d), group.commutator(h, alpha_lift))
        _math_check(tmap.values[h] == want, f"subgroup formula fails at h={h}")

    coords = dec.exponent_coordinates()
    for g in group.elements():
        tup = coords[proj(g)]
        base = e
        for t, a in zip(lifts, tup):
            base = group.mul(base, group.pow(t, a))
        h = group.mul(group.inv(base), g)
        _math_check(h in sub, f"decomposition of {g} does not land in H")
        acc = e
        for t, a in zip(lifts, tup):
            acc = group.mul(acc, group.pow(tmap.values[t], a))
        acc = group.mul(acc, tmap.values[h])
        _math_check(tmap.values[g] == acc, f"transfer does not factor through the decomposition at {g}")

    return CorrectingFunction(
        group, sub, phi, d, dec.factors, lifts, alpha_lift, tuple(alpha_lifts)
    )


def check_correcting_cocycle(group: FiniteGroup, sub: Subgroup) -> CheckReport:
    """phi(g1 g2) / (phi(g1) phi(g2)) = [g1, g2]^(d(d-1)/2) for all pairs;
    for odd d, phi is identically trivial."""
    cf = correcting_function(group, sub)
    d = cf.index
    exponent = d * (d - 1) // 2
    e = group.identity_id
    report = CheckReport(
        "correcting_function_cocycle",
        True,
        stats={"group": group.label, "index": d, "pairs": group.order**2},
    )
    hom_violations = 0
    for g1 in group.elements():
        for g2 in group.elements():
            p12 = cf.values[group.mul(g1, g2)]
            # phi values are involutions, so dividing is multiplying
            lhs = group.mul(group.mul(p12, cf.values[g1]), cf.values[g2])
            rhs = group.pow(group.commutator(g1, g2), exponent)
            if lhs != rhs:
                report.passed = False
                report.counterexamples.append({"g": [g1, g2], "lhs": lhs, "rhs": rhs})
            if lhs != e:
                hom_violations += 1
    report.stats["phi_is_homomorphism"] = hom_violations == 0
    if d % 2 == 1:
        trivial = all(v == e for v in cf.values)
        report.stats["phi_trivial"] = trivial
        if not trivial:
            report.passed = False
            report.counterexamples.append({"g": -1, "lhs": -1, "rhs": e})
    return report


def check_correcting_ratio(
    group: FiniteGroup, sub1: Subgroup, sub2: Subgroup
) -> CheckReport:
    """phi_{G/H'} / phi_{G/H} is a homomorphism into the central involutions."""
    cf1 = correcting_function(group, sub1)
    cf2 = correcting_function(group, sub2)
    if cf1.index != cf2.index:
        raise PreconditionFailed(
            f"subgroups have different indices {cf1.index} != {cf2.index}"
        )
    ratio = [group.mul(v2, group.inv(v1)) for v1, v2 in zip(cf1.values, cf2.values)]
    z2 = central_involutions(group)
    report = CheckReport(
        "correcting_function_ratio",
        True,
        stats={"group": group.label, "index": cf1.index},
    )
    for g, v in enumerate(ratio):
        if v not in z2:
            report.passed = False
            report.counterexamples.append({"g": g, "lhs": v, "rhs": -1})
    for g1 in group.elements():
        for g2 in group.elements():
            lhs = ratio[group.mul(g1, g2)]
            rhs = group.mul(ratio[g1], ratio[g2])
            if lhs != rhs:
                report.passed = False
                report.counterexamples.append({"g": [g1, g2], "lhs": lhs, "rhs": rhs})
    return report


def check_transfer_identities(
    group: FiniteGroup, sub: Subgroup, *, include_furtwangler: bool = True
) -> CheckReport:
    """Three classical identities. Conjugation covariance
    T_{G/gHg^-1}(g') = g T_{G/H}(g') g^-1 holds for every subgroup; the
    image statement Im(T) <= H^{G/H} <= Z(G) needs H abelian normal;
    Furtwangler's bound T_{G/K}(g)^{[K:[G,G]]} = 1 runs over every K
    between [G,G] and G."""
    report = CheckReport(
        "transfer_identities", True, stats={"group": group.label, "subgroup_order": len(sub)}
    )

    # conjugation covariance
    base_derived = None if sub.is_abelian else _derived_members(group, sub)
    base_values = [transfer_product(group, sub, g) for g in group.elements()]
    conj_failures = 0
    seen_conjugates: dict[tuple[int, ...], Subgroup] = {}
    for g in group.elements():
        members = tuple(sorted(group.conjugate(g, h) for h in sub.members))
        csub = seen_conjugates.get(members)
        if csub is None:
            csub = Subgroup(group, members)
            seen_conjugates[members] = csub
        derived = None if csub.is_abelian else _derived_members(group, csub)
        for gp in group.elements():
            lhs = transfer_product(group, csub, gp)
            rhs = group.conjugate(g, base_values[gp])
            if derived is not None:
                lhs = _coset_min(group, lhs, derived)
                rhs = _coset_min(group, rhs, derived)
            if lhs != rhs:
                conj_failures += 1
                if len(report.counterexamples) < 10:
                    report.counterexamples.append(
                        {"g": [g, gp], "lhs": lhs, "rhs": rhs, "identity": "conjugation"}
                    )
    report.stats["conjugation_pass"] = conj_failures == 0
    if conj_failures:
        report.passed = False

    # image in the fixed central part
    if sub.is_abelian and group.is_normal(sub):
        central = set(group.center().members)
        fixed = {
            h
            for h in sub.members
            if all(group.conjugate(g, h) == h for g in group.elements())
        }
        img_ok = fixed <= central
        for g in group.elements():
            if transfer(group, sub, g) not in fixed:
                img_ok = False
                report.counterexamples.append(
                    {"g": g, "lhs": transfer(group, sub, g), "rhs": -1, "identity": "image"}
                )
        report.stats["image_pass"] = img_ok
        if not img_ok:
            report.passed = False
    else:
        report.stats["image_pass"] = None

    if include_furtwangler:
        furt_failures = 0
        derived_order = len(group.commutator_subgroup())
        n_checked = 0
        for k_sub in coabelian_subgroups(group):
            n_checked += 1
            exponent = len(k_sub) // derived_order
            tmap = transfer_table(group, k_sub)
            target = tmap.codomain if tmap.codomain is not None else group
            e = target.identity_id
            for g in group.elements():
                if target.pow(tmap.values[g], exponent) != e:
                    furt_failures += 1
                    if len(report.counterexamples) < 10:
                        report.counterexamples.append(
                            {
                                "g": g,
                                "lhs": target.pow(tmap.values[g], exponent),
                                "rhs": e,
                                "identity": "furtwangler",
                                "K": list(k_sub.members),
                            }
                        )
        report.stats["furtwangler_pass"] = furt_failures == 0
        report.stats["furtwangler_subgroups"] = n_checked
        if furt_failures:
            report.passed = False
    return report
