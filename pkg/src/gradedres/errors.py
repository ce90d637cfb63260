"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(AlgebraError):
    pass


class DuplicateVariable(AlgebraError):
    pass


class NonHomogeneousIdeal(AlgebraError):
    pass


class RingMismatch(AlgebraError):
    pass


class ZeroPolynomial(AlgebraError):
    pass


class DegreeOverflow(AlgebraError):
    pass


class InhomogeneousGenerator(AlgebraError):
    pass


class InhomogeneousElement(AlgebraError):
    pass


class ModuleMismatch(AlgebraError):
    pass


class NotAComplex(AlgebraError):
    pass


class CapExceeded(AlgebraError):
    pass


class ZeroModule(AlgebraError):
    pass


class GradeSearchExhausted(AlgebraError):
    """Diagnostic: grade search ran past the variable count. Should be unreachable."""


class NotAFactorization(AlgebraError):
    pass


class InhomogeneousMatrix(AlgebraError):
    pass


class NotCertified(AlgebraError):
    """Module lacks an accepted G-perfectness certificate."""


class ParseError(AlgebraError):
    """Syntax error with source position information."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        loc = "" if line is None else f" at line {line}, col {col}"
        super().__init__(f"{message}{loc}")


class UnknownName(ParseError):
    pass
