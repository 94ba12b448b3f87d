"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for malformed input, 3 for numerical failure, 4 for a violated
precondition.
"""


class HerglotzLabError(Exception):
    exit_code = 3


class SchemaError(HerglotzLabError):
    exit_code = 2


class UnknownName(SchemaError):
    pass


class BadParams(SchemaError):
    pass


class NumericalFailure(HerglotzLabError):
    exit_code = 3


class NoConvergence(NumericalFailure):
    pass


class Inconclusive(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass


class DivergentBoundary(NumericalFailure):
    pass


class ZeroEncountered(NumericalFailure):
    pass


class PreconditionViolation(HerglotzLabError):
    exit_code = 4


class SpectrumOnCut(PreconditionViolation):
    pass


class NotPSD(PreconditionViolation):
    pass


class NotIntegrable(PreconditionViolation):
    pass


class AtomOnSingularity(PreconditionViolation):
    pass


class OnRealAxis(PreconditionViolation):
    pass


class SingularPencil(PreconditionViolation):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConditionNotMet(PreconditionViolation):
    pass


class SingularM(PreconditionViolation):
    pass


class SingularP(PreconditionViolation):
    pass


class InterlacingViolation(PreconditionViolation):
    pass


class NormalizationInsufficient(PreconditionViolation):
    pass


class NotNormalized(PreconditionViolation):
    pass


class NoTruthData(PreconditionViolation):
    pass


class NotMember(PreconditionViolation):
    pass
