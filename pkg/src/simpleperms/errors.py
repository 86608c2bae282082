"""Exception types raised across the package.

Input problems derive from :class:`SimplePermsError` (and usually from
``ValueError``).  Failed mathematical checks derive from
:class:`VerificationError`; the command line maps those to exit status 1.
"""


class SimplePermsError(Exception):
    pass


# -- input / contract errors ------------------------------------------------

class NotABijection(SimplePermsError, ValueError):
    pass


class EmptyPermutation(SimplePermsError, ValueError):
    pass


class ArityMismatch(SimplePermsError, ValueError):
    pass


class NotAMinimalBlock(SimplePermsError, ValueError):
    pass


class NonUnitDivisor(SimplePermsError, ValueError):
    pass


class CompositionConstantTermNonzero(SimplePermsError, ValueError):
    pass


class NotRevertible(SimplePermsError, ValueError):
    pass


class TooLarge(SimplePermsError, ValueError):
    pass


class NoSimpleOfLength3(SimplePermsError, ValueError):
    pass


class ZeroInput(SimplePermsError, ValueError):
    pass


# -- verification failures --------------------------------------------------

class VerificationError(SimplePermsError):
    """A computed quantity contradicts an identity or theorem."""


class DivisibilityViolation(VerificationError):
    pass


class IdentityViolation(VerificationError):
    def __init__(self, name: str, order: int, lhs=None, rhs=None):
        self.name = name
        self.order = order
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{name}: first mismatch at x^{order} ({lhs} != {rhs})")


class MethodDisagreement(VerificationError):
    pass


class CrossCheckFailure(VerificationError):
    def __init__(self, sequence: str, index: int, first, second):
        self.sequence = sequence
        self.index = index
        self.first = first
        self.second = second
        super().__init__(f"{sequence}[{index}]: {first} != {second}")


class BijectionViolation(VerificationError):
    pass


class TheoremViolation(VerificationError):
    pass


class CongruenceViolation(VerificationError):
    pass


class ClaimViolation(VerificationError):
    pass
