"""Exception hierarchy shared by every module of the package."""


class DeBrangesError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(DeBrangesError, ValueError):
    """A Schur function specification violates one of its invariants."""


class ParseError(SpecError):
    """A spec file could not be parsed.

    ``field`` names the offending entry (``"atoms[0]"``) and ``line`` the
    source line when the parser can locate it.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(field)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class PoleAtReflectedZero(DeBrangesError, ZeroDivisionError):
    """Exterior evaluation hit a reflected zero 1/conj(a)."""


class QuadratureFailure(DeBrangesError, ArithmeticError):
    """A quadrature or Cauchy-integral refinement failed to reach tolerance."""


class NotRealResult(DeBrangesError, ArithmeticError):
    """A quantity that must be real came out with a large imaginary part."""


class RepeatedZeros(SpecError):
    """The model space construction only supports simple zeros."""


class SingularResolvent(DeBrangesError, ArithmeticError):
    """(I - conj(lambda) X*) was numerically singular."""


class UnsupportedSymbol(DeBrangesError, TypeError):
    """Toeplitz actions are only available for rational symbols."""


class ConsistencyViolation(DeBrangesError):
    """Two decidable channels of the same equivalence disagree."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
