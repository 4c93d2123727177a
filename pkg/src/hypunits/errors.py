"""Exception hierarchy shared by every module."""


class HypUnitsError(ValueError):
    """Base class; the CLI maps it to INVALID_INPUT."""


class NoSolutionError(HypUnitsError):
    """A well-posed problem with an empty answer; the CLI maps it to NO_SOLUTION."""


class NotSquareFree(HypUnitsError):
    pass


class OutOfRange(HypUnitsError):
    pass


class MixedRings(HypUnitsError):
    pass


class NotRealField(HypUnitsError):
    pass


class PerfectSquare(HypUnitsError):
    pass


class PreconditionError(HypUnitsError):
    pass


class NotAUnit(HypUnitsError):
    pass


class NotInTable(HypUnitsError):
    pass


class NotIntegral(HypUnitsError):
    pass


class NotDivisionRegime(HypUnitsError):
    pass


class WrongRegime(HypUnitsError):
    pass


class NormMinusOneSeed(HypUnitsError):
    pass


class TwoDNotSquareFree(HypUnitsError):
    pass


class WrongFamily(HypUnitsError):
    pass


class ParseError(HypUnitsError):
    pass


class NoSolution(NoSolutionError):
    pass


class NoDecomposition(NoSolutionError):
    pass
