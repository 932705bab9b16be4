"""Exception hierarchy shared by all hrep modules."""


class HrepError(Exception):
    """Base class for all errors raised by this package."""


class NotAGroup(HrepError):
    """A Cayley table fails one of the group axioms.

    For associativity failures, ``triple`` holds the first violating
    (i, j, k) in lexicographic order.
    """

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class InvalidSpec(HrepError):
    """A group construction request has invalid parameters."""


class EnumerationBoundExceeded(HrepError):
    """An exhaustive enumeration was requested above its size bound."""


class NotNormal(HrepError):
    """A subgroup required to be normal is not."""


class NotAbelian(HrepError):
    """An operation defined only for abelian groups got a nonabelian one."""


class DomainNotNormal(HrepError):
    """A character's domain must be normal in the ambient group."""


class NoExtension(HrepError):
    """A character cannot be extended to the requested overgroup."""


class CommutatorOutsideDomain(HrepError):
    """Commutators of the ambient group do not land in the pairing's domain."""


class NotCoabelian(HrepError):
    """The quotient by the candidate scalar group is not abelian."""


class NotInvariant(HrepError):
    """A character is not invariant under ambient conjugation."""


class Degenerate(HrepError):
    """The commutator pairing is degenerate on the quotient."""


class NotACharacter(HrepError):
    """A value map is not a multiplicative character."""


class PreconditionFailed(HrepError):
    """A named hypothesis of a transfer computation does not hold."""


class NotAnExtension(HrepError):
    """The supplied character does not restrict to the scalar character."""


class DimMismatch(HrepError):
    """Monomial matrices of different sizes cannot be combined."""


class KernelNotReduced(HrepError):
    """The operation requires a pair whose scalar character is faithful."""


class InvalidPrime(HrepError):
    """The order-p^3 classification needs an odd prime with p^3 <= 512."""
