"""Monomial matrices, the three determinant routes, sign tables, twisting,
and the order-p^3 dichotomy."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrep import char_theory as ct, heisenberg as hb, induced_det as idet
from hrep.char_theory import HALF, ZERO, QmodZ, extend_character, extend_character_all
from hrep.errors import (
    DimMismatch,
    InvalidPrime,
    KernelNotReduced,
    NotACharacter,
    NotAnExtension,
)
from hrep.group_core import (
    central_product,
    cyclic,
    dihedral,
    extraspecial_p3_exp_p2,
    heisenberg_mod,
    quaternion8,
)
from hrep.induced_det import MonomialMatrix, monomial_det, monomial_mul

E, B, A, AB, A2, A2B, A3, A3B = range(8)


def pair_of(group, dim):
    return [p for p in hb.enumerate_pairs(group, max_order=512) if p.dim == dim][0]


def default_setup(group, dim):
    pair = pair_of(group, dim)
    sub = pair.maximal_isotropics[0]
    chi_h = extend_character(group, pair.chi, sub)
    return pair, sub, chi_h


# -- monomial matrices ------------------------------------------------------------


def test_identity_determinant():
    assert monomial_det(MonomialMatrix.identity(3)) == ZERO


def test_swap_determinant_is_minus_one():
    swap = MonomialMatrix(2, (1, 0), (ZERO, ZERO))
    assert monomial_det(swap) == HALF


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        monomial_mul(MonomialMatrix.identity(2), MonomialMatrix.identity(3))
    with pytest.raises(DimMismatch):
        MonomialMatrix(2, (0, 0), (ZERO, ZERO))


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_det_is_multiplicative_on_random_monomials(seed, dim):
    rng = random.Random(seed)

    def random_monomial():
        perm = list(range(dim))
        rng.shuffle(perm)
        exps = tuple(QmodZ(rng.randrange(12), rng.randrange(1, 13)) for _ in range(dim))
        return MonomialMatrix(dim, tuple(perm), exps)

    a, b = random_monomial(), random_monomial()
    assert monomial_det(monomial_mul(a, b)) == monomial_det(a) + monomial_det(b)


def test_permutation_sign_against_inversion_count():
    import itertools

    for perm in itertools.permutations(range(4)):
        inversions = sum(
            1
            for i in range(4)
            for j in range(i + 1, 4)
            if perm[i] > perm[j]
        )
        expected = HALF if inversions % 2 else ZERO
        m = MonomialMatrix(4, perm, tuple(ZERO for _ in range(4)))
        assert monomial_det(m) == expected


# -- induced matrices ---------------------------------------------------------------


def test_identity_element_induces_identity_matrix():
    pair, sub, chi_h = default_setup(dihedral(8), 2)
    m = idet.induced_matrix(pair, sub, chi_h, E)
    assert m == MonomialMatrix.identity(2)


def test_scalar_subgroup_acts_by_scalars():
    for group, dim in ((dihedral(8), 2), (heisenberg_mod(3), 3)):
        pair, sub, chi_h = default_setup(group, dim)
        for z in pair.Z.members:
            m = idet.induced_matrix(pair, sub, chi_h, z)
            assert m.is_scalar()
            assert m.exps[0] == pair.chi(z)


def test_d8_reflection_is_antidiagonal():
    pair = pair_of(dihedral(8), 2)
    sub = [h for h in pair.maximal_isotropics if h.members == (E, A, A2, A3)][0]
    chi_h = extend_character(pair.group, pair.chi, sub)
    assert chi_h(A) == QmodZ(1, 4)
    m = idet.induced_matrix(pair, sub, chi_h, B)
    assert m.perm == (1, 0)


def test_rejects_non_extension():
    pair, sub, _ = default_setup(dihedral(8), 2)
    with pytest.raises(NotAnExtension):
        idet.induced_matrix(pair, sub, ct.trivial_character(sub), B)


def test_homomorphism_certificate():
    for group, dim in ((dihedral(8), 2), (heisenberg_mod(3), 3)):
        pair, sub, chi_h = default_setup(group, dim)
        report = idet.check_homomorphism(pair, sub, chi_h)
        assert report.passed
        assert report.stats["mode"] == "exhaustive"


def test_homomorphism_certificate_sampled_mode_is_seeded():
    pair, sub, chi_h = default_setup(heisenberg_mod(5), 5)
    r1 = idet.check_homomorphism(pair, sub, chi_h, seed=5)
    r2 = idet.check_homomorphism(pair, sub, chi_h, seed=5)
    assert r1.passed and r1.as_dict() == r2.as_dict()
    assert r1.stats["mode"] == "sampled"


def test_linear_pair_reduces_to_character_multiplicativity():
    g = cyclic(6)
    pair = hb.enumerate_pairs(g)[2]
    sub = pair.maximal_isotropics[0]
    chi_h = extend_character(g, pair.chi, sub)
    report = idet.check_homomorphism(pair, sub, chi_h)
    assert report.passed
    for x in g.elements():
        assert idet.det_direct(pair, sub, chi_h, x) == pair.chi(x)


# -- coset signs ----------------------------------------------------------------------


def test_delta_trivial_on_normal_subgroup_elements():
    d8 = dihedral(8)
    pair = pair_of(d8, 2)
    sub = pair.maximal_isotropics[1]
    for h in sub.members:
        assert idet.delta_character(d8, sub, h) == ZERO


def test_delta_trivial_for_odd_index():
    h3 = heisenberg_mod(3)
    pair = pair_of(h3, 3)
    for sub in pair.maximal_isotropics:
        for g in h3.elements():
            assert idet.delta_character(h3, sub, g) == ZERO


def test_delta_on_d8_reflection():
    d8 = dihedral(8)
    rot = d8.subgroup([E, A, A2, A3])
    assert idet.delta_character(d8, rot, B) == HALF


# -- the three routes agree ------------------------------------------------------------


def test_d8_reflection_determinant_is_minus_one():
    pair, sub, chi_h = default_setup(dihedral(8), 2)
    assert idet.det_direct(pair, sub, chi_h, B) == HALF
    assert idet.det_gallagher(pair, sub, chi_h, B) == HALF
    value, eps = idet.det_formula(pair, B)
    assert value == HALF and eps == HALF


def test_gallagher_equals_direct_everywhere_on_d8():
    pair = pair_of(dihedral(8), 2)
    for sub in pair.maximal_isotropics:
        for chi_h in extend_character_all(pair.group, pair.chi, sub):
            for g in pair.group.elements():
                assert idet.det_gallagher(pair, sub, chi_h, g) == idet.det_direct(
                    pair, sub, chi_h, g
                )


def test_formula_requires_reduced_pair():
    d16 = dihedral(16)
    pair = [p for p in hb.enumerate_pairs(d16) if p.dim == 2][0]
    with pytest.raises(KernelNotReduced):
        idet.det_formula(pair, 0)
    with pytest.raises(KernelNotReduced):
        idet.epsilon_table(pair, pair.maximal_isotropics[0])


def test_heisenberg3_determinant_trivial():
    pair = pair_of(heisenberg_mod(3), 3)
    assert all(idet.det_formula(pair, g)[0] == ZERO for g in pair.group.elements())


def test_extraspecial27_determinant_nontrivial():
    pair = pair_of(extraspecial_p3_exp_p2(3), 3)
    values = [idet.det_formula(pair, g)[0] for g in pair.group.elements()]
    assert any(not v.is_zero() for v in values)


def test_oracle_equivalence_reports():
    for group, dim in (
        (dihedral(8), 2),
        (quaternion8(), 2),
        (heisenberg_mod(3), 3),
        (dihedral(16), 2),
        (central_product(dihedral(8), quaternion8()), 4),
    ):
        pair = pair_of(group, dim)
        report = idet.oracle_equivalence_report(pair)
        assert report.passed, (group.label, report.counterexamples[:3])


# -- the sign function ------------------------------------------------------------------


def test_epsilon_pattern_on_d8():
    pair, sub, chi_h = default_setup(dihedral(8), 2)
    table = idet.epsilon_table(pair, sub, chi_h)
    assert table == {
        E: ZERO,
        A2: ZERO,
        B: HALF,
        A: HALF,
        AB: HALF,
        A2B: HALF,
        A3: HALF,
        A3B: HALF,
    }


def test_epsilon_pattern_on_q8():
    pair, sub, chi_h = default_setup(quaternion8(), 2)
    table = idet.epsilon_table(pair, sub, chi_h)
    center = set(pair.Z.members)
    for g, v in table.items():
        assert v == (ZERO if g in center else HALF)
    # the 2-dim irrep of the quaternion group is symplectic: det is trivial
    for g in pair.group.elements():
        assert idet.det_formula(pair, g)[0] == ZERO


def test_epsilon_trivial_for_odd_dim():
    pair, sub, chi_h = default_setup(heisenberg_mod(3), 3)
    table = idet.epsilon_table(pair, sub, chi_h)
    assert all(v == ZERO for v in table.values())


def test_epsilon_trivial_for_two_rank_four():
    for factors in ((dihedral(8), dihedral(8)), (dihedral(8), quaternion8())):
        cp = central_product(*factors)
        pair, sub, chi_h = default_setup(cp, 4)
        table = idet.epsilon_table(pair, sub, chi_h)
        assert all(v == ZERO for v in table.values())
        # cross-check against the direct determinant: det == chi(g^4)
        for g in cp.elements():
            assert idet.det_direct(pair, sub, chi_h, g) == pair.chi(cp.pow(g, 4))


def test_epsilon_independent_of_the_isotropic():
    pair = pair_of(dihedral(8), 2)
    tables = []
    for sub in pair.maximal_isotropics:
        chi_h = extend_character(pair.group, pair.chi, sub)
        tables.append(idet.epsilon_table(pair, sub, chi_h))
    assert tables[0] == tables[1] == tables[2]


def test_epsilon_invariant_under_center_and_square_shifts():
    pair, sub, chi_h = default_setup(quaternion8(), 2)
    g8 = pair.group
    table = idet.epsilon_table(pair, sub, chi_h)
    for g in g8.elements():
        for z in pair.Z.members:
            assert table[g8.mul(g, z)] == table[g]
        for x in g8.elements():
            assert table[g8.mul(g, g8.mul(x, x))] == table[g]


def test_epsilon_case_reports():
    cases = [
        (dihedral(8), 2, "rk2=2"),
        (quaternion8(), 2, "rk2=2"),
        (heisenberg_mod(3), 3, "odd"),
        (central_product(dihedral(8), dihedral(8)), 4, "rk2>=4"),
    ]
    for group, dim, case in cases:
        pair = pair_of(group, dim)
        report = idet.epsilon_case_report(pair)
        assert report.passed, report.counterexamples[:3]
        assert report.stats["case"] == case


# -- independence of the isotropic -------------------------------------------------------


def test_isotropic_independence_d8():
    report = idet.isotropic_independence(pair_of(dihedral(8), 2))
    assert report.passed
    assert report.stats["n_extensions_total"] == 6


def test_isotropic_independence_heis3():
    report = idet.isotropic_independence(pair_of(heisenberg_mod(3), 3))
    assert report.passed
    assert report.stats["n_extensions_total"] == 12
    assert set(report.stats["det"]) == {"0/1"}


def test_isotropic_independence_linear_pair():
    g = cyclic(6)
    pair = hb.enumerate_pairs(g)[1]
    report = idet.isotropic_independence(pair)
    assert report.passed
    assert report.stats["n_extensions_total"] == 1


# -- twisting -----------------------------------------------------------------------------


def test_twist_by_trivial_character_is_identity():
    pair = pair_of(dihedral(8), 2)
    omega = ct.linear_characters(pair.group)[0]
    twisted = idet.twist(pair, omega)
    assert twisted.chi.exps == pair.chi.exps


def test_twist_kills_order_three_characters_in_dim_three():
    h3 = heisenberg_mod(3)
    pair = pair_of(h3, 3)
    for omega in ct.linear_characters(h3):
        twisted = idet.twist(pair, omega)
        # d * omega = 3 * omega = 0, so the determinant is unchanged
        for g in h3.elements():
            assert idet.det_formula(twisted, g)[0] == idet.det_formula(pair, g)[0]


def test_twist_identity_over_all_characters():
    for group, dim in ((dihedral(8), 2), (quaternion8(), 2)):
        pair = pair_of(group, dim)
        for omega in ct.linear_characters(group):
            idet.twist(pair, omega)  # raises on any identity failure


def test_twist_rejects_non_characters():
    pair = pair_of(dihedral(8), 2)
    with pytest.raises(NotACharacter):
        idet.twist(pair, pair.chi)  # wrong domain


def test_trivializing_twist_exists_iff_expected():
    # quaternion pair: determinant already trivial, trivial twist returned
    pair_q8 = pair_of(quaternion8(), 2)
    omega = idet.find_trivializing_twist(pair_q8)
    assert omega is not None and omega.is_trivial()
    # dihedral pair: no twist can absorb the sign
    assert idet.find_trivializing_twist(pair_of(dihedral(8), 2)) is None
    # exponent-p^2 group: chi is faithful on G^p = [G,G], impossible
    pair_es = pair_of(extraspecial_p3_exp_p2(3), 3)
    assert idet.find_trivializing_twist(pair_es) is None
    # exponent-p group: determinant already trivial
    pair_h3 = pair_of(heisenberg_mod(3), 3)
    omega3 = idet.find_trivializing_twist(pair_h3)
    assert omega3 is not None and omega3.is_trivial()


def test_trivializing_twist_criterion_on_odd_instances():
    """For odd dim the search outcome must match triviality of chi on
    G^d intersect [G,G] (the guarded structural criterion)."""
    for group in (heisenberg_mod(3), extraspecial_p3_exp_p2(3)):
        for pair in hb.enumerate_pairs(group):
            if not pair.is_reduced:
                pair, _ = hb.quotient_by_kernel(pair)
            g = pair.group
            z0 = set(g.power_subgroup(pair.dim).members) & set(
                g.commutator_subgroup().members
            )
            criterion = all(pair.chi(x).is_zero() for x in z0)
            assert (idet.find_trivializing_twist(pair) is not None) == criterion


# -- order-p^3 dichotomy --------------------------------------------------------------------


def test_p3_classification_for_p3():
    report = idet.p3_classification(3)
    by_kind = {row["kind"]: row for row in report["rows"]}
    assert by_kind["exponent_p"]["power_subgroup"] == [0]
    assert by_kind["exponent_p"]["det_trivial"] is True
    assert by_kind["exponent_p2"]["power_subgroup"] == by_kind["exponent_p2"]["center"]
    assert by_kind["exponent_p2"]["det_trivial"] is False


def test_p3_classification_rejects_bad_primes():
    for p in (2, 4, 9, 11):
        with pytest.raises(InvalidPrime):
            idet.p3_classification(p)


# -- report shape ---------------------------------------------------------------------------


def test_det_report_on_d8():
    pair = pair_of(dihedral(8), 2)
    report = idet.build_det_report(pair)
    assert report.all_agree
    assert report.case == "rk2=2"
    payload = report.as_dict()
    assert set(payload) == {"group", "Z", "dim", "rk2", "case", "rows", "all_agree"}
    assert len(payload["rows"]) == 8
    assert set(payload["rows"][0]) == {"g", "direct", "gallagher", "formula", "epsilon"}


def test_det_report_reduces_first():
    d16 = dihedral(16)
    pair = [p for p in hb.enumerate_pairs(d16) if p.dim == 2][0]
    report = idet.build_det_report(pair)
    assert report.pair.group.order == 8
    assert report.all_agree
