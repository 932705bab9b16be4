"""Finite groups as Cayley tables over dense element ids 0..n-1.

Conventions used throughout the package:

* the commutator is ``[x, y] = x y x^-1 y^-1`` (the opposite convention
  would invert every commutator pairing built on top of this module);
* element ids are dense ``0..n-1`` and every subgroup is stored as a
  sorted tuple of member ids, so enumerations and reports are
  byte-stable;
* all types are immutable after construction and safe to share across
  threads; structural data (center, commutator subgroup, conjugacy
  classes) is computed lazily and cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    EnumerationBoundExceeded,
    InvalidSpec,
    NotAGroup,
    NotNormal,
)

# Full O(n^3) associativity check up to this order; larger tables are
# spot-checked on random triples and flagged partially validated.
ASSOC_CHECK_BOUND = 512
SPOT_CHECK_TRIPLES = 100_000

# Default cap for exhaustive subgroup enumeration.
SUBGROUP_ENUM_BOUND = 256


def _validate_table(table: np.ndarray, assoc_bound: int, seed: int):
    """Check the group axioms, returning (identity, inverse, fully_validated)."""
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise NotAGroup(f"table has shape {table.shape}, expected square")
    n = table.shape[0]
    if n == 0:
        raise NotAGroup("empty table")
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("table entries must be ids in 0..n-1")

    ref = np.arange(n)
    row_ok = (np.sort(table, axis=1) == ref).all(axis=1)
    if not row_ok.all():
        raise NotAGroup(f"row {int(np.flatnonzero(~row_ok)[0])} is not a permutation")
    col_ok = (np.sort(table, axis=0) == ref[:, None]).all(axis=0)
    if not col_ok.all():
        raise NotAGroup(f"column {int(np.flatnonzero(~col_ok)[0])} is not a permutation")

    identity = -1
    for i in range(n):
        if np.array_equal(table[i], ref) and np.array_equal(table[:, i], ref):
            identity = i
            break
    if identity < 0:
        raise NotAGroup("no two-sided identity element")

    inverse = np.empty(n, dtype=np.int64)
    for i in range(n):
        js = np.flatnonzero(table[i] == identity)
        if js.size != 1 or table[js[0], i] != identity:
            raise NotAGroup(f"element {i} has no two-sided inverse")
        inverse[i] = js[0]

    if n <= assoc_bound:
        for i in range(n):
            lhs = table[table[i], :]
            rhs = table[i][table]
            if not np.array_equal(lhs, rhs):
                j, k = np.argwhere(lhs != rhs)[0]
                raise NotAGroup(
                    f"associativity fails at (i,j,k)=({i},{int(j)},{int(k)})",
                    triple=(i, int(j), int(k)),
                )
        fully_validated = True
    else:
        rng = np.random.default_rng(seed)
        trip = rng.integers(0, n, size=(SPOT_CHECK_TRIPLES, 3))
        lhs = table[table[trip[:, 0], trip[:, 1]], trip[:, 2]]
        rhs = table[trip[:, 0], table[trip[:, 1], trip[:, 2]]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i, j, k = (int(v) for v in trip[bad[0]])
            raise NotAGroup(
                f"associativity fails at (i,j,k)=({i},{j},{k})", triple=(i, j, k)
            )
        fully_validated = False

    return identity, inverse, fully_validated


class FiniteGroup:
    """A finite group given by its Cayley table, ``table[i][j] = g_i * g_j``."""

    def __init__(self, table, label="G", *, assoc_bound=ASSOC_CHECK_BOUND, seed=0):
        arr = np.asarray(table, dtype=np.int64)
        identity, inverse, fully = _validate_table(arr, assoc_bound, seed)
        self.order: int = int(arr.shape[0])
        self.table: list[list[int]] = [[int(v) for v in row] for row in arr]
        self.identity_id: int = identity
        self.inverse: list[int] = [int(v) for v in inverse]
        self.label: str = label
        self.fully_validated: bool = fully
        self._np_table = arr
        self._coset_cache: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, ...]]] = {}

    # -- element operations -------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverse[x]

    def pow(self, x: int, k: int) -> int:
        """k-th power by square-and-multiply; negative k allowed."""
        if k < 0:
            x, k = self.inverse[x], -k
        result = self.identity_id
        while k:
            if k & 1:
                result = self.table[result][x]
            x = self.table[x][x]
            k >>= 1
        return result

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity_id:
            y = self.table[y][x]
            k += 1
        return k

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x y x^-1 y^-1."""
        t = self.table
        return t[t[t[x][y]][self.inverse[x]]][self.inverse[y]]

    def elements(self) -> range:
        return range(self.order)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    # -- cached structure ----------------------------------------------------

    @cached_property
    def is_abelian(self) -> bool:
        return np.array_equal(self._np_table, self._np_table.T)

    @cached_property
    def exponent(self) -> int:
        result = 1
        for x in self.elements():
            result = math.lcm(result, self.element_order(x))
        return result

    def center(self) -> "Subgroup":
        return self._center

    @cached_property
    def _center(self) -> "Subgroup":
        t = self._np_table
        members = [int(x) for x in range(self.order) if np.array_equal(t[x], t[:, x])]
        return Subgroup(self, tuple(members))

    def commutator_subgroup(self) -> "Subgroup":
        return self._commutator_subgroup

    @cached_property
    def _commutator_subgroup(self) -> "Subgroup":
        gens = {self.commutator(x, y) for x in self.elements() for y in self.elements()}
        return self.subgroup_generated(gens)

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        classes = []
        class_of = [-1] * self.order
        for x in self.elements():
            if class_of[x] < 0:
                orbit = sorted({self.conjugate(g, x) for g in self.elements()})
                idx = len(classes)
                classes.append(tuple(orbit))
                for y in orbit:
                    class_of[y] = idx
        self._class_of = tuple(class_of)
        return tuple(classes)

    def class_of(self, x: int) -> tuple[int, ...]:
        classes = self.conjugacy_classes
        return classes[self._class_of[x]]

    @cached_property
    def abelianization(self) -> tuple["FiniteGroup", "GroupHom"]:
        return self.quotient(self.commutator_subgroup())

    # -- subgroup machinery ---------------------------------------------------

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity_id,))

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def subgroup(self, members) -> "Subgroup":
        """Build a subgroup from an explicit member set, validating closure."""
        sub = Subgroup(self, tuple(sorted(set(int(m) for m in members))))
        sub.validate()
        return sub

    def subgroup_generated(self, gens) -> "Subgroup":
        """Closure of the generating set under multiplication (breadth-first)."""
        gens = sorted({int(g) for g in gens})
        members = {self.identity_id}
        frontier = [self.identity_id]
        row = self.table
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = row[x][g]
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return Subgroup(self, tuple(sorted(members)))

    def lower_central_series(self) -> list["Subgroup"]:
        """[C^1 G, C^2 G, ...] with C^{i+1} = [C^i, G], until stabilization."""
        series = [self.full_subgroup()]
        while True:
            current = series[-1]
            gens = {self.commutator(c, g) for c in current.members for g in self.elements()}
            nxt = self.subgroup_generated(gens)
            if nxt.members == current.members:
                break
            series.append(nxt)
        return series

    def nilpotency_class(self) -> int | None:
        series = self.lower_central_series()
        if len(series[-1]) != 1:
            return None
        return len(series) - 1

    def power_subgroup(self, d: int) -> "Subgroup":
        """Subgroup generated by all d-th powers (the power set itself need
        not be closed)."""
        if d < 1:
            raise InvalidSpec(f"power subgroup needs d >= 1, got {d}")
        return self.subgroup_generated({self.pow(g, d) for g in self.elements()})

    def is_normal(self, sub: "Subgroup") -> bool:
        table = self._np_table
        inv = np.asarray(self.inverse)
        mask = np.zeros(self.order, dtype=bool)
        mask[list(sub.members)] = True
        conj = table[table[:, list(sub.members)], inv[:, None]]
        return bool(mask[conj].all())

    def all_subgroups(self, max_order: int = SUBGROUP_ENUM_BOUND) -> list["Subgroup"]:
        """Every subgroup, deterministically ordered by (size, member tuple).

        Closure over adjoining single elements to already-found subgroups;
        exhaustive because any subgroup arises by adding generators one at
        a time to the trivial subgroup.
        """
        if self.order > max_order:
            raise EnumerationBoundExceeded(
                f"|G|={self.order} exceeds subgroup enumeration bound {max_order}"
            )
        # adjoin one element at a time, carrying small generating sets so
        # each closure stays linear in the subgroup produced
        seen: dict[tuple[int, ...], tuple[int, ...]] = {}
        triv = (self.identity_id,)
        seen[triv] = ()
        frontier = [triv]
        while frontier:
            new_frontier = []
            for mem in frontier:
                gens = seen[mem]
                inside = set(mem)
                for g in self.elements():
                    if g in inside:
                        continue
                    new_gens = gens + (g,)
                    bigger = self.subgroup_generated(new_gens).members
                    if bigger not in seen:
                        seen[bigger] = new_gens
                        new_frontier.append(bigger)
            frontier = new_frontier
        ordered = sorted(seen, key=lambda m: (len(m), m))
        return [Subgroup(self, m) for m in ordered]

    def normal_subgroups(self, max_order: int = SUBGROUP_ENUM_BOUND) -> list["Subgroup"]:
        return [sub for sub in self.all_subgroups(max_order) if self.is_normal(sub)]

    def quotient(self, normal: "Subgroup", label: str | None = None):
        """Quotient by a normal subgroup.

        Cosets become quotient elements ordered by minimal representative
        id. Returns (quotient group, projection homomorphism).
        """
        if normal.parent is not self:
            raise NotNormal("subgroup belongs to a different group")
        if not self.is_normal(normal):
            raise NotNormal(f"{normal.members} is not normal in {self.label}")
        n = self.order
        if len(normal) == 1:
            qlabel = label if label is not None else f"{self.label}/{{1}}"
            quot = FiniteGroup(self._np_table, label=qlabel)
            quot.coset_reps = tuple(range(n))
            return quot, GroupHom(self, quot, tuple(range(n)))
        coset_of = [-1] * n
        reps: list[int] = []
        for x in range(n):
            if coset_of[x] < 0:
                idx = len(reps)
                reps.append(x)
                for h in normal.members:
                    coset_of[self.mul(x, h)] = idx
        qn = len(reps)
        qtable = [[coset_of[self.mul(reps[i], reps[j])] for j in range(qn)] for i in range(qn)]
        qlabel = label if label is not None else f"{self.label}/{{{len(normal)}}}"
        quot = FiniteGroup(qtable, label=qlabel)
        quot.coset_reps = tuple(reps)
        hom = GroupHom(self, quot, tuple(coset_of))
        return quot, hom

    def left_transversal(self, sub: "Subgroup") -> list[int]:
        """Minimal id in each left coset g*H, listed in ascending order."""
        transversal, _ = self.coset_positions(sub)
        return list(transversal)

    def coset_positions(self, sub: "Subgroup"):
        """(transversal, pos) with pos[x] = index of the coset x*H."""
        key = sub.members
        cached = self._coset_cache.get(key)
        if cached is not None:
            return cached
        n = self.order
        pos = [-1] * n
        reps: list[int] = []
        for x in range(n):
            if pos[x] < 0:
                idx = len(reps)
                reps.append(x)
                for h in sub.members:
                    pos[self.mul(x, h)] = idx
        result = (tuple(reps), tuple(pos))
        self._coset_cache[key] = result
        return result


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` stored as a sorted tuple of member ids."""

    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.members))) != self.members:
            raise InvalidSpec("subgroup members must be sorted and duplicate-free")
        if self.members and not (0 <= self.members[0] and self.members[-1] < self.parent.order):
            raise InvalidSpec("subgroup members out of range")

    def validate(self) -> None:
        g = self.parent
        mem = set(self.members)
        if g.identity_id not in mem:
            raise NotAGroup("subgroup must contain the identity")
        for x in self.members:
            if g.inv(x) not in mem:
                raise NotAGroup(f"subgroup not closed under inverse at {x}")
            for y in self.members:
                if g.mul(x, y) not in mem:
                    raise NotAGroup(f"subgroup not closed under product at ({x},{y})")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._member_set

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def is_abelian(self) -> bool:
        g = self.parent
        return all(g.mul(x, y) == g.mul(y, x) for x in self.members for y in self.members)

    def index(self) -> int:
        return self.parent.order // len(self.members)

    @cached_property
    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """Relabel the subgroup as a standalone group.

        Returns (group, to_parent) where to_parent[i] is the parent id of
        local element i; local ids follow ascending parent ids. The full
        subgroup returns the parent itself.
        """
        g = self.parent
        if len(self.members) == g.order:
            return g, self.members
        pos = {m: i for i, m in enumerate(self.members)}
        table = [[pos[g.mul(x, y)] for y in self.members] for x in self.members]
        grp = FiniteGroup(table, label=f"{g.label}<{len(self.members)}>")
        return grp, self.members

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return set(other.members) <= self._member_set


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by its total value table on source ids."""

    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def validate(self) -> None:
        m = np.asarray(self.map, dtype=np.int64)
        src = self.source._np_table
        tgt = self.target._np_table
        lhs = m[src]
        rhs = tgt[np.ix_(m, m)]
        if not np.array_equal(lhs, rhs):
            i, j = np.argwhere(lhs != rhs)[0]
            raise NotAGroup(f"map is not multiplicative at ({int(i)},{int(j)})")

    def kernel(self) -> Subgroup:
        e = self.target.identity_id
        return Subgroup(
            self.source, tuple(x for x in self.source.elements() if self.map[x] == e)
        )

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.map))))

    def preimage(self, members) -> Subgroup:
        wanted = set(members)
        return Subgroup(
            self.source, tuple(x for x in self.source.elements() if self.map[x] in wanted)
        )


# -- constructors --------------------------------------------------------------


def from_cayley_table(table, label="G", *, assoc_bound=ASSOC_CHECK_BOUND, seed=0) -> FiniteGroup:
    """Validate a raw Cayley table and wrap it as a FiniteGroup."""
    return FiniteGroup(table, label=label, assoc_bound=assoc_bound, seed=seed)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec(f"cyclic group needs n >= 1, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, label=f"c{n}")


def abelian_group(factors: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups Z/m_1 x ... x Z/m_s (tuple-lex ids)."""
    factors = [int(m) for m in factors]
    if not factors or any(m < 1 for m in factors):
        raise InvalidSpec(f"abelian factors must be positive, got {factors}")
    grp = direct_product(*[cyclic(m) for m in factors])
    return _relabel(grp, "ab:" + ",".join(str(m) for m in factors))


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given order 2n; element a^i b^j has id 2*i + j."""
    if order < 2 or order % 2:
        raise InvalidSpec(f"dihedral group needs an even order >= 2, got {order}")
    n = order // 2

    def mul(i1, j1, i2, j2):
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return 2 * i + (j1 + j2) % 2

    table = [
        [mul(x // 2, x % 2, y // 2, y % 2) for y in range(order)] for x in range(order)
    ]
    return FiniteGroup(table, label=f"d{order}")


def quaternion8() -> FiniteGroup:
    """Quaternion group of order 8; element a^i b^j (a^4=e, b^2=a^2) has id 2*i + j."""

    def mul(i1, j1, i2, j2):
        i = (i1 + (i2 if j1 == 0 else -i2) + (2 if j1 and j2 else 0)) % 4
        return 2 * i + (j1 + j2) % 2

    table = [[mul(x // 2, x % 2, y // 2, y % 2) for y in range(8)] for x in range(8)]
    return FiniteGroup(table, label="q8")


def heisenberg_mod(n: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over Z/n; (a,b,c) has id a*n^2 + b*n + c."""
    if n < 1:
        raise InvalidSpec(f"heisenberg group needs n >= 1, got {n}")
    order = n**3

    def mul(x, y):
        a1, r = divmod(x, n * n)
        b1, c1 = divmod(r, n)
        a2, r = divmod(y, n * n)
        b2, c2 = divmod(r, n)
        return ((a1 + a2) % n) * n * n + ((b1 + b2 + a1 * c2) % n) * n + (c1 + c2) % n

    table = [[mul(x, y) for y in range(order)] for x in range(order)]
    return FiniteGroup(table, label=f"heis{n}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, math.isqrt(p) + 1):
        if p % q == 0:
            return False
    return True


def extraspecial_p3_exp_p2(p: int) -> FiniteGroup:
    """The order-p^3 group of exponent p^2: <a, b | a^(p^2), b^p, bab^-1 = a^(1+p)>.

    Element a^i b^j has id i*p + j.
    """
    if not _is_prime(p):
        raise InvalidSpec(f"extraspecial construction needs a prime, got {p}")
    p2 = p * p
    # powers of the twist 1+p modulo p^2, indexed by j
    twist = [pow(1 + p, j, p2) for j in range(p)]

    def mul(i1, j1, i2, j2):
        return ((i1 + i2 * twist[j1]) % p2) * p + (j1 + j2) % p

    order = p2 * p
    table = [
        [mul(x // p, x % p, y // p, y % p) for y in range(order)] for x in range(order)
    ]
    return FiniteGroup(table, label=f"es_p3_exp_p2:{p}")


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    """Direct product with mixed-radix (tuple-lexicographic) element ids."""
    if not groups:
        raise InvalidSpec("direct product needs at least one factor")
    if len(groups) == 1:
        return groups[0]
    result = groups[0]
    for other in groups[1:]:
        result = _pair_product(result, other)
    return _relabel(result, "prod:" + ",".join(g.label for g in groups))


def _pair_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    nb = b.order
    order = a.order * nb

    def mul(x, y):
        xa, xb = divmod(x, nb)
        ya, yb = divmod(y, nb)
        return a.mul(xa, ya) * nb + b.mul(xb, yb)

    table = [[mul(x, y) for y in range(order)] for x in range(order)]
    return FiniteGroup(table, label=f"prod:{a.label},{b.label}")


def central_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Central product identifying the unique central involutions of the factors.

    Each factor must have exactly one central element of order 2.
    """
    za = _unique_central_involution(a)
    zb = _unique_central_involution(b)
    prod = _pair_product(a, b)
    diag = prod.subgroup_generated([za * b.order + zb])
    quot, _ = prod.quotient(diag, label=f"cp:{a.label},{b.label}")
    return quot


def _unique_central_involution(g: FiniteGroup) -> int:
    found = [
        x
        for x in g.center().members
        if x != g.identity_id and g.mul(x, x) == g.identity_id
    ]
    if len(found) != 1:
        raise InvalidSpec(
            f"{g.label} has {len(found)} central involutions, central product needs exactly 1"
        )
    return found[0]


def _relabel(g: FiniteGroup, label: str) -> FiniteGroup:
    g.label = label
    return g


_FAMILIES = {
    "cyclic": lambda params: cyclic(int(params["n"])),
    "dihedral": lambda params: dihedral(int(params["order"])),
    "quaternion8": lambda params: quaternion8(),
    "heisenberg_mod": lambda params: heisenberg_mod(int(params["n"])),
    "extraspecial_p3_exp_p2": lambda params: extraspecial_p3_exp_p2(int(params["p"])),
    "abelian": lambda params: abelian_group(params["factors"]),
    "direct_product": lambda params: direct_product(
        *[construct_spec(f) for f in params["factors"]]
    ),
    "central_product": lambda params: _central_product_spec(params["factors"]),
}


def _central_product_spec(factor_specs) -> FiniteGroup:
    if len(factor_specs) != 2:
        raise InvalidSpec("central product takes exactly two factors")
    return central_product(construct_spec(factor_specs[0]), construct_spec(factor_specs[1]))


def construct(family: str, params: dict | None = None) -> FiniteGroup:
    """Build a group from one of the named constructor families."""
    builder = _FAMILIES.get(family)
    if builder is None:
        raise InvalidSpec(f"unknown group family {family!r}")
    try:
        return builder(params or {})
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad parameters for family {family!r}: {exc}") from exc


def construct_spec(spec: dict) -> FiniteGroup:
    """Build a group from a {"family": ..., "params": {...}} mapping."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise InvalidSpec(f"group spec must be a mapping with a 'family' key, got {spec!r}")
    return construct(spec["family"], spec.get("params", {}))
