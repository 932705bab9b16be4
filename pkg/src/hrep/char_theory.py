"""Exact root-of-unity arithmetic, linear characters, and the commutator
pairing with its radical.

A root of unity e^(2*pi*i*q) is stored as the reduced rational exponent
q = num/den in [0, 1); adding exponents multiplies roots, so the whole
determinant pipeline stays in one exact value domain (-1 is 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import (
    CommutatorOutsideDomain,
    DomainNotNormal,
    EnumerationBoundExceeded,
    NoExtension,
    NotAbelian,
    NotACharacter,
    NotInvariant,
)
from .group_core import FiniteGroup, Subgroup

CHARACTER_ENUM_BOUND = 4096


@dataclass(frozen=True)
class QmodZ:
    """A reduced rational exponent in [0, 1); the value domain of all
    characters and determinants."""

    num: int = 0
    den: int = 1

    def __post_init__(self):
        num, den = self.num, self.den
        if den == 0:
            raise ZeroDivisionError("QmodZ denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __add__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QmodZ":
        return QmodZ(-self.num, self.den)

    def __sub__(self, other: "QmodZ") -> "QmodZ":
        return self + (-other)

    def scale(self, k: int) -> "QmodZ":
        """k-th power of the root of unity: q -> k*q mod 1."""
        return QmodZ(k * self.num, self.den)

    @property
    def order(self) -> int:
        """Multiplicative order of the root of unity."""
        return self.den

    def is_zero(self) -> bool:
        return self.num == 0

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    @classmethod
    def parse(cls, text: str) -> "QmodZ":
        num, den = text.split("/")
        return cls(int(num), int(den))


ZERO = QmodZ(0, 1)
HALF = QmodZ(1, 2)


@dataclass(frozen=True)
class LinearCharacter:
    """A multiplicative map from a subgroup's elements into QmodZ.

    Values are stored as a total tuple aligned with ``domain.members``;
    equality is structural.
    """

    domain: Subgroup
    exps: tuple[QmodZ, ...]

    def __post_init__(self):
        if len(self.exps) != len(self.domain.members):
            raise NotACharacter("value tuple length must match the domain")

    @cached_property
    def _index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.domain.members)}

    def __call__(self, x: int) -> QmodZ:
        return self.exps[self._index[x]]

    @classmethod
    def from_values(cls, domain: Subgroup, values: dict[int, QmodZ]) -> "LinearCharacter":
        return cls(domain, tuple(values[m] for m in domain.members))

    def validate(self) -> None:
        """Exhaustive multiplicativity check over the whole domain.

        Runs on a common denominator so the n^2 comparisons stay in
        integer arrays.
        """
        g = self.domain.parent
        if not self(g.identity_id).is_zero():
            raise NotACharacter("character must send the identity to 0/1")
        grp, _ = self.domain.as_group
        common = math.lcm(*(q.den for q in self.exps))
        ints = np.array([q.num * (common // q.den) for q in self.exps], dtype=np.int64)
        table = grp._np_table
        ok = (ints[:, None] + ints[None, :]) % common == ints[table]
        if not ok.all():
            i, j = np.argwhere(~ok)[0]
            x, y = self.domain.members[int(i)], self.domain.members[int(j)]
            raise NotACharacter(f"multiplicativity fails at ({x},{y})")

    def kernel(self) -> Subgroup:
        return Subgroup(
            self.domain.parent,
            tuple(m for m in self.domain.members if self(m).is_zero()),
        )

    def is_trivial(self) -> bool:
        return all(q.is_zero() for q in self.exps)

    def restrict(self, sub: Subgroup) -> "LinearCharacter":
        return LinearCharacter(sub, tuple(self(m) for m in sub.members))

    def __mul__(self, other: "LinearCharacter") -> "LinearCharacter":
        """Pointwise product of two characters on the same domain."""
        if other.domain.members != self.domain.members:
            raise NotACharacter("can only multiply characters on the same domain")
        return LinearCharacter(self.domain, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def as_dict(self) -> dict:
        return {
            "domain": list(self.domain.members),
            "values": {str(m): str(self(m)) for m in self.domain.members},
        }


def trivial_character(domain: Subgroup) -> LinearCharacter:
    return LinearCharacter(domain, tuple(ZERO for _ in domain.members))


def characters_of_abelian(group: FiniteGroup) -> list[LinearCharacter]:
    """All |A| characters of an abelian group, ordered by index tuple.

    The character indexed by (c_1, ..., c_s) sends the i-th invariant
    generator t_i to c_i/m_i.
    """
    from .abelian import decompose

    if not group.is_abelian:
        raise NotAbelian(f"{group.label} is not abelian")
    if group.order > CHARACTER_ENUM_BOUND:
        raise EnumerationBoundExceeded(
            f"|A|={group.order} exceeds character enumeration bound {CHARACTER_ENUM_BOUND}"
        )
    dec = decompose(group)
    coords = dec.exponent_coordinates()
    domain = group.full_subgroup()
    chars = []
    for idx in product(*[range(m) for m in dec.factors]):
        exps = []
        for x in group.elements():
            value = ZERO
            for c, a, m in zip(idx, coords[x], dec.factors):
                value = value + QmodZ(c * a, m)
            exps.append(value)
        chars.append(LinearCharacter(domain, tuple(exps)))
    return chars


def characters_of_subgroup(sub: Subgroup) -> list[LinearCharacter]:
    """All linear characters of a subgroup (through its abelianization)."""
    grp, to_parent = sub.as_group
    derived = grp.commutator_subgroup()
    if len(derived) == 1:
        base_chars = characters_of_abelian(grp)
        lift = list(range(grp.order))
    else:
        quot, proj = grp.quotient(derived)
        base_chars = characters_of_abelian(quot)
        lift = list(proj.map)
    result = []
    for chi in base_chars:
        exps = tuple(chi(lift[i]) for i in range(grp.order))
        result.append(LinearCharacter(sub, exps))
    return result


def linear_characters(group: FiniteGroup) -> list[LinearCharacter]:
    """All linear characters of a group, trivial character first."""
    return characters_of_subgroup(group.full_subgroup())


def is_g_invariant(group: FiniteGroup, chi: LinearCharacter) -> bool:
    """True iff chi(g z g^-1) == chi(z) for all g in G, z in the domain."""
    domain = chi.domain
    if domain.parent is not group or not group.is_normal(domain):
        raise DomainNotNormal(f"character domain is not normal in {group.label}")
    for z in domain.members:
        base = chi(z)
        for w in group.class_of(z):
            if chi(w) != base:
                return False
    return True


def extend_character(
    group: FiniteGroup, chi: LinearCharacter, over: Subgroup
) -> LinearCharacter:
    """Extend chi from its domain Z to an overgroup H, deterministically.

    Repeatedly adjoins the smallest-id element t of H not yet covered;
    with m minimal such that t^m lands in the covered part, the value
    chi(t^m) = num/den is lifted to num/(den*m), the smallest of the m
    branch choices. ``extend_character_all`` enumerates every branch.
    """
    return _extend(group, chi, over, all_branches=False)[0]


def extend_character_all(
    group: FiniteGroup, chi: LinearCharacter, over: Subgroup
) -> list[LinearCharacter]:
    """Every extension of chi to the overgroup, in branch-lexicographic order."""
    return _extend(group, chi, over, all_branches=True)


def _extend(group, chi, over, *, all_branches):
    z_members = chi.domain.members
    if over.members == z_members:
        return [chi]
    if not over.contains_subgroup(chi.domain):
        raise NoExtension("overgroup does not contain the character's domain")
    over_set = set(over.members)
    # commutators of the overgroup must die in chi
    for h1 in over.members:
        for h2 in over.members:
            c = group.commutator(h1, h2)
            if c not in chi.domain._member_set or not chi(c).is_zero():
                raise NoExtension(f"character is not trivial on [H,H] (witness [{h1},{h2}])")
    # chi must be invariant under conjugation from the overgroup
    for h in over.members:
        for z in z_members:
            w = group.conjugate(h, z)
            if chi(w) != chi(z):
                raise NoExtension(f"character is not H-invariant (witness h={h}, z={z})")

    def grow(values: dict[int, QmodZ]) -> list[dict[int, QmodZ]]:
        if len(values) == len(over_set):
            return [values]
        t = min(over_set - values.keys())
        m, p = 1, t
        while p not in values:
            p = group.mul(p, t)
            m += 1
        base = values[p]
        branches = range(m) if all_branches else range(1)
        results = []
        for j in branches:
            w = QmodZ(base.num + j * base.den, base.den * m)
            # the covered part contains [H,H], hence is normal with cyclic
            # quotient <t>: every new element is c*t^k uniquely
            extended = dict(values)
            power = group.identity_id
            for k in range(1, m):
                power = group.mul(power, t)
                shift = w.scale(k)
                for c, vc in values.items():
                    extended[group.mul(c, power)] = vc + shift
            results.extend(grow(extended))
        return results

    start = {z: chi(z) for z in z_members}
    tables = grow(start)
    out = []
    for values in tables:
        result = LinearCharacter.from_values(over, values)
        try:
            result.validate()
        except NotACharacter as exc:
            raise NoExtension(f"branch assignment is inconsistent: {exc}") from exc
        out.append(result)
    return out


class Bicharacter:
    """The pairing X(g1, g2) = chi([g1, g2]) on a group with scalar part Z.

    Requires [G, G] inside Z so every commutator is in chi's domain. The
    pairing is alternating, and descends to (G/Z) x (G/Z) whenever chi is
    invariant under conjugation.
    """

    def __init__(self, group: FiniteGroup, modulus: Subgroup, chi: LinearCharacter):
        if not modulus.contains_subgroup(group.commutator_subgroup()):
            raise CommutatorOutsideDomain(
                f"[G,G] is not contained in the given modulus of {group.label}"
            )
        self.group = group
        self.modulus = modulus
        self.chi = chi

    def value(self, g1: int, g2: int) -> QmodZ:
        return self.chi(self.group.commutator(g1, g2))

    @cached_property
    def values(self) -> dict[tuple[int, int], QmodZ]:
        """Total table on G x G (built lazily)."""
        g = self.group
        return {
            (x, y): self.value(x, y) for x in g.elements() for y in g.elements()
        }

    def radical(self) -> Subgroup:
        """{g : X(g, h) = 0 for all h}, by direct scan."""
        g = self.group
        members = [
            x
            for x in g.elements()
            if all(self.value(x, y).is_zero() for y in g.elements())
        ]
        return Subgroup(g, tuple(members))

    def is_nondegenerate(self) -> bool:
        return self.radical().members == self.modulus.members


def bicharacter_of(group: FiniteGroup, modulus: Subgroup, chi: LinearCharacter) -> Bicharacter:
    """Build the commutator pairing and verify it descends to cosets of Z."""
    x = Bicharacter(group, modulus, chi)
    reps, _ = group.coset_positions(modulus)
    for r in reps:
        for s in reps:
            base = x.value(r, s)
            for z in modulus.members:
                if (
                    x.value(group.mul(r, z), s) != base
                    or x.value(r, group.mul(s, z)) != base
                ):
                    raise NotInvariant(
                        f"pairing is not constant on cosets at ({r},{s}) shifted by {z}"
                    )
    return x
