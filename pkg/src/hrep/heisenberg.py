"""Heisenberg pairs (Z, chi): validation, enumeration, kernel reduction,
maximal isotropic subgroups, and symplectic bases.

A pair consists of a coabelian normal subgroup Z and an invariant linear
character chi of Z whose commutator pairing X(g1, g2) = chi([g1, g2]) is
nondegenerate on G/Z. Linear characters of G appear as the degenerate
dim-1 case Z = G and flow through the same pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from . import abelian
from .char_theory import Bicharacter, LinearCharacter, QmodZ, characters_of_subgroup
from .errors import (
    Degenerate,
    EnumerationBoundExceeded,
    InvalidSpec,
    NotCoabelian,
    NotInvariant,
    NotNormal,
)
from .group_core import FiniteGroup, GroupHom, Subgroup
from .transfer import coabelian_subgroups, is_two_step_nilpotent

PAIR_ENUM_BOUND = 256
ISOTROPIC_ENUM_BOUND = 4096


def _math_check(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


@dataclass(frozen=True)
class HeisenbergPair:
    """A validated pair (Z, chi) with dim^2 = [G:Z]."""

    group: FiniteGroup
    Z: Subgroup
    chi: LinearCharacter
    dim: int

    @cached_property
    def ambient(self) -> tuple[FiniteGroup, GroupHom]:
        """The abelian quotient A = G/Z with its projection."""
        return self.group.quotient(self.Z)

    def x_value(self, g1: int, g2: int) -> QmodZ:
        """The commutator pairing X(g1, g2) = chi([g1, g2])."""
        return self.chi(self.group.commutator(g1, g2))

    @cached_property
    def x_on_quotient(self) -> dict[tuple[int, int], QmodZ]:
        """X as a table on A x A, evaluated on minimal coset representatives."""
        quot, _ = self.ambient
        reps = quot.coset_reps
        return {
            (a, b): self.x_value(reps[a], reps[b])
            for a in quot.elements()
            for b in quot.elements()
        }

    def bicharacter(self) -> Bicharacter:
        return Bicharacter(self.group, self.Z, self.chi)

    @cached_property
    def is_reduced(self) -> bool:
        """True iff chi is faithful on Z (the pair equals its kernel reduction)."""
        return len(self.chi.kernel()) == 1

    @cached_property
    def squares_times_z(self) -> Subgroup:
        """The subgroup G^2 Z controlling the sign character's cosets."""
        gens = {self.group.mul(g, g) for g in self.group.elements()}
        gens.update(self.Z.members)
        return self.group.subgroup_generated(gens)

    @cached_property
    def maximal_isotropics(self) -> list[Subgroup]:
        return all_maximal_isotropics(self)

    @cached_property
    def two_rank(self) -> int:
        """rk_2(G/Z); always even because the quotient splits as B x B."""
        quot, _ = self.ambient
        rank = abelian.two_rank(quot)
        _math_check(rank % 2 == 0, "two-rank of a symplectic quotient must be even")
        return rank

    def as_dict(self) -> dict:
        return {
            "Z": list(self.Z.members),
            "chi": self.chi.as_dict(),
            "dim": self.dim,
        }


def validate_pair(group: FiniteGroup, scalar: Subgroup, chi: LinearCharacter) -> HeisenbergPair:
    """Check the three pair conditions and return the validated pair.

    Nondegeneracy is screened on coset representatives, which is
    equivalent to the full radical computation once invariance holds
    (the pairing is then constant on cosets of Z in both arguments).
    """
    if chi.domain.members != scalar.members or chi.domain.parent is not group:
        raise InvalidSpec("character domain must be exactly the scalar subgroup")
    chi.validate()
    if not group.is_normal(scalar):
        raise NotNormal(f"scalar subgroup {scalar.members} is not normal")
    derived = group.commutator_subgroup()
    if not scalar.contains_subgroup(derived):
        witness = next(m for m in derived.members if m not in scalar)
        raise NotCoabelian(f"G/Z is not abelian: commutator {witness} escapes Z")
    for z in scalar.members:
        base = chi(z)
        for w in group.class_of(z):
            if chi(w) != base:
                raise NotInvariant(f"chi is not invariant on the class of {z}")

    reps, _ = group.coset_positions(scalar)
    for t in reps:
        if t in scalar:
            continue
        if all(chi(group.commutator(t, u)).is_zero() for u in reps):
            raise Degenerate(f"coset of {t} lies in the radical")

    index = group.order // len(scalar)
    dim = math.isqrt(index)
    _math_check(dim * dim == index, "nondegenerate pairing forces a square index")
    return HeisenbergPair(group, scalar, chi, dim)


def enumerate_pairs(group: FiniteGroup, *, max_order: int = PAIR_ENUM_BOUND) -> list[HeisenbergPair]:
    """All valid pairs, ordered by (|Z| descending, Z members, chi index).

    Candidate scalar subgroups are exactly the subgroups between [G,G]
    and G; candidate characters run through each Z's linear characters.
    """
    if group.order > max_order:
        raise EnumerationBoundExceeded(
            f"|G|={group.order} exceeds pair enumeration bound {max_order}"
        )
    pairs = []
    candidates = sorted(coabelian_subgroups(group), key=lambda s: (-len(s), s.members))
    for scalar in candidates:
        index = group.order // len(scalar)
        if math.isqrt(index) ** 2 != index:
            continue
        for chi in characters_of_subgroup(scalar):
            try:
                pairs.append(validate_pair(group, scalar, chi))
            except (NotInvariant, Degenerate):
                continue
    return pairs


def quotient_by_kernel(pair: HeisenbergPair) -> tuple[HeisenbergPair, GroupHom]:
    """Push the pair to G/Ker(chi), where the group is two-step nilpotent
    and chi becomes faithful; the dimension is unchanged."""
    group = pair.group
    kernel = pair.chi.kernel()
    quot, proj = group.quotient(kernel, label=f"{group.label}~red")
    scalar = Subgroup(quot, tuple(sorted({proj(z) for z in pair.Z.members})))
    reps = quot.coset_reps
    chi_bar = LinearCharacter(scalar, tuple(pair.chi(reps[m]) for m in scalar.members))
    reduced = validate_pair(quot, scalar, chi_bar)
    _math_check(reduced.dim == pair.dim, "kernel reduction must preserve the dimension")
    _math_check(is_two_step_nilpotent(quot), "reduced group must be two-step nilpotent")
    _math_check(reduced.is_reduced, "reduced character must be faithful")
    return reduced, proj


def _quotient_perp(pair: HeisenbergPair, subset: set[int], within: list[int]) -> list[int]:
    """Elements of ``within`` pairing trivially with every element of ``subset``
    (all ids in the quotient A = G/Z)."""
    x = pair.x_on_quotient
    return [a for a in within if all(x[(a, s)].is_zero() for s in subset)]


def maximal_isotropic_through(pair: HeisenbergPair, g: int) -> Subgroup:
    """A maximal isotropic subgroup containing g, grown greedily.

    Start from <g> Z and repeatedly adjoin the smallest-id element of
    H-perp outside H until H is self-perpendicular; the result has index
    dim in G.
    """
    quot, proj = pair.ambient
    everything = list(quot.elements())
    current = quot.subgroup_generated([proj(g)])
    while True:
        perp = _quotient_perp(pair, set(current.members), everything)
        extra = [a for a in perp if a not in current]
        if not extra:
            break
        current = quot.subgroup_generated(set(current.members) | {min(extra)})
    result = proj.preimage(current.members)
    _math_check(g in result, "greedy growth lost the seed element")
    _math_check(result.index() == pair.dim, "greedy growth did not reach index dim")
    return result


def all_maximal_isotropics(pair: HeisenbergPair) -> list[Subgroup]:
    """All subgroups H between Z and G with X trivial on H and [G:H] = dim."""
    index = pair.group.order // len(pair.Z)
    if index > ISOTROPIC_ENUM_BOUND:
        raise EnumerationBoundExceeded(
            f"[G:Z]={index} exceeds isotropic enumeration bound {ISOTROPIC_ENUM_BOUND}"
        )
    quot, proj = pair.ambient
    x = pair.x_on_quotient
    found = []
    for sub in quot.all_subgroups(max_order=ISOTROPIC_ENUM_BOUND):
        if len(sub) != pair.dim:
            continue
        if all(x[(a, b)].is_zero() for a in sub.members for b in sub.members):
            found.append(proj.preimage(sub.members))
    found.sort(key=lambda s: s.members)
    return found


@dataclass(frozen=True)
class SymplecticBasis:
    """Hyperbolic pairs (t_i, t_i', m_i) with m_1 | ... | m_s splitting G/Z,
    plus the two transverse maximal isotropics they span."""

    pairs: tuple[tuple[int, int, int], ...]
    H: Subgroup
    H_prime: Subgroup

    def as_dict(self) -> dict:
        return {
            "pairs": [{"t": t, "t_prime": tp, "m": m} for t, tp, m in self.pairs]
        }


def symplectic_basis(pair: HeisenbergPair) -> SymplecticBasis:
    """Split A = G/Z into hyperbolic planes.

    Picks the smallest element of maximal order m, pairs it with the
    smallest partner where X has exact order m, and recurses on the
    orthogonal complement of the plane they span.
    """
    quot, proj = pair.ambient
    x = pair.x_on_quotient
    current = [a for a in quot.elements()]
    pairs_desc: list[tuple[int, int, int]] = []
    while len(current) > 1:
        orders = {a: quot.element_order(a) for a in current}
        m = max(orders.values())
        t = min(a for a, o in orders.items() if o == m)
        partners = [a for a in current if x[(t, a)].order == m]
        if not partners:
            raise Degenerate(f"no hyperbolic partner of exact order {m} for {t}")
        tp = min(partners)
        plane = quot.subgroup_generated([t, tp])
        _math_check(len(plane) == m * m, "hyperbolic plane must have order m^2")
        remaining = _quotient_perp(pair, {t, tp}, current)
        _math_check(
            len(remaining) * m * m == len(current),
            "orthogonal complement of a hyperbolic plane has complementary order",
        )
        pairs_desc.append((t, tp, m))
        current = remaining

    ordered = tuple(reversed(pairs_desc))
    reps = quot.coset_reps
    h_side = quot.subgroup_generated([t for t, _, _ in ordered])
    hp_side = quot.subgroup_generated([tp for _, tp, _ in ordered])
    h_sub = proj.preimage(h_side.members)
    hp_sub = proj.preimage(hp_side.members)

    prod_m = 1
    for _, _, m in ordered:
        prod_m *= m
    _math_check(prod_m == pair.dim, "hyperbolic orders must multiply to dim")
    _math_check(
        set(h_sub.members) & set(hp_sub.members) == set(pair.Z.members),
        "transverse isotropics must meet exactly in Z",
    )
    products = {
        pair.group.mul(a, b) for a in h_sub.members for b in hp_sub.members
    }
    _math_check(len(products) == pair.group.order, "G must factor as H * H'")
    lifted = tuple((reps[t], reps[tp], m) for t, tp, m in ordered)
    return SymplecticBasis(lifted, h_sub, hp_sub)


def two_rank_of_quotient(pair: HeisenbergPair) -> int:
    """rk_2(G/Z), cached on the pair."""
    return pair.two_rank
