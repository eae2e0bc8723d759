"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to: 1 for invalid input,
2 for precision problems, 3 for structural failures.
"""
from __future__ import annotations


class RamiconError(Exception):
    exit_code = 3


class ValidationError(RamiconError):
    exit_code = 1


class PrecisionError(RamiconError):
    exit_code = 2


class StructureError(RamiconError):
    exit_code = 3


# arithmetic
class DivisionByZero(ValidationError, ZeroDivisionError):
    pass


class OrderMismatch(ValidationError):
    pass


class VariableMismatch(ValidationError):
    pass


class EpsOrderMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonUnitLeading(StructureError):
    pass


class NotPullbackable(StructureError):
    pass


class PrecisionExhausted(PrecisionError):
    pass


class SingularSystem(StructureError):
    pass


# exponent data
class DegenerateLeading(ValidationError):
    pass


class IllegalResidueTerm(ValidationError):
    pass


class RepeatedRoots(ValidationError):
    pass


class InvalidDocument(ValidationError):
    pass


# gauge / normal form
class SingularGauge(StructureError):
    pass


class ResidualMismatch(StructureError):
    def __init__(self, qprime: int, s: int, k: int, value, message: str = ""):
        self.qprime, self.s, self.k, self.value = qprime, s, k, value
        text = message or f"residual at (q'={qprime}, s={s}, k={k}) is {value}"
        super().__init__(text)


class NotRamified(StructureError):
    pass


class NotAdapted(StructureError):
    pass


NotAdaptedGauge = NotAdapted


class AxiomViolation(StructureError):
    pass


class NotDescendable(StructureError):
    pass


# lifts
class NotLogarithmic(ValidationError):
    pass


class ResidueDeformation(ValidationError):
    pass


class NotEquivalent(StructureError):
    pass
