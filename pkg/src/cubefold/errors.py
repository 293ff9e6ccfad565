"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for validation failures, 2 for lemma violations, 3 for resource caps.
"""


class CubefoldError(Exception):
    exit_code = 1

    def __init__(self, message, *, witness=None, line=None):
        super().__init__(message)
        self.witness = witness
        self.line = line

    def __str__(self):
        msg = super().__str__()
        if self.line is not None:
            return f"line {self.line}: {msg}"
        return msg


class ParseError(CubefoldError):
    def __init__(self, message, *, line=None, column=None):
        super().__init__(message, line=line)
        self.column = column

    def __str__(self):
        base = Exception.__str__(self)
        if self.line is None:
            return base
        if self.column is None:
            return f"line {self.line}: {base}"
        return f"line {self.line}, column {self.column}: {base}"


# pocset construction and queries
class PocsetError(CubefoldError):
    pass


class DuplicatePair(PocsetError):
    pass


class StarFixedPoint(PocsetError):
    pass


class ComparableWithComplement(PocsetError):
    pass


class OrderCycle(PocsetError):
    pass


class UnknownHalfspace(PocsetError):
    pass


class UnknownHyperplane(PocsetError):
    pass


class EqualHyperplanes(PocsetError):
    pass


class NotComparable(PocsetError):
    pass


# group actions
class ActionError(CubefoldError):
    pass


class NotBijection(ActionError):
    pass


class NotAutomorphism(ActionError):
    pass


class Inversion(ActionError):
    pass


class UnpairedGenerator(ActionError):
    pass


class InversionCreated(ActionError):
    """A fold produced a quotient on which the descended action inverts a hyperplane."""

    exit_code = 2


# dual complex
class ComplexTooLarge(CubefoldError):
    exit_code = 3


class NotAVertex(CubefoldError):
    pass


# quotients, maps, folds
class NotAdmissible(CubefoldError):
    pass


class NotTransverseInQuotient(CubefoldError):
    pass


class AM1Violated(CubefoldError):
    pass


class MapError(CubefoldError):
    pass


class NotResolution(CubefoldError):
    pass


class NotFoldable(CubefoldError):
    pass


class NotIdentified(CubefoldError):
    pass


class OrbitMapNotInjective(CubefoldError):
    pass


class LemmaViolation(CubefoldError):
    """A property proved for all inputs failed on a concrete one.

    Raised when a witness that must exist cannot be found; always a bug in
    this package or a corrupted input object, never a user error.
    """

    exit_code = 2


WitnessNotFound = LemmaViolation
