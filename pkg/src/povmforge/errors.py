"""Exception hierarchy.

Every error raised on purpose by the package derives from ``PovmForgeError``;
input-validation errors additionally derive from ``ValueError`` so callers can
catch them the usual way.
"""


class PovmForgeError(Exception):
    """Base class for all package errors."""


# finite fields
class NotPrime(PovmForgeError, ValueError):
    pass


class NoModulusFound(PovmForgeError):
    pass


class ZeroInput(PovmForgeError, ValueError):
    pass


class FieldMismatch(PovmForgeError, ValueError):
    pass


# characters
class NotInSubgroup(PovmForgeError, ValueError):
    pass


class DomainMismatch(PovmForgeError, ValueError):
    pass


# functions
class NotTwoToOne(PovmForgeError, ValueError):
    pass


class EvenQ(PovmForgeError, ValueError):
    """The requested construction needs an odd field order."""


class TooLarge(PovmForgeError, ValueError):
    pass


# linear algebra
class ConvergenceFailure(PovmForgeError, ArithmeticError):
    pass


class NotPositiveDefinite(PovmForgeError, ArithmeticError):
    def __init__(self, smallest):
        super().__init__(f"matrix is not positive definite (smallest eigenvalue {smallest:.3e})")
        self.smallest = smallest


class DimensionMismatch(PovmForgeError, ValueError):
    pass


# constructions
class NotTwoToOnePN(PovmForgeError, ValueError):
    pass


class InvalidPermutation(PovmForgeError, ValueError):
    pass


class TrivialCharacter(PovmForgeError, ValueError):
    pass


class ClosedFormMismatch(PovmForgeError, ArithmeticError):
    pass


class BoundViolated(PovmForgeError, ArithmeticError):
    def __init__(self, case, pair, measured, bound):
        super().__init__(
            f"case {case}: pair {pair} measured {measured!r} exceeds bound {bound!r}"
        )
        self.case = case
        self.pair = pair
        self.measured = measured
        self.bound = bound


class NotInN(PovmForgeError, ArithmeticError):
    pass


class LiBoundViolated(PovmForgeError, ArithmeticError):
    pass


# verification
class TooFewVectors(PovmForgeError, ValueError):
    pass
