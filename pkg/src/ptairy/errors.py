"""Exception hierarchy shared by all modules.

Two roots: :class:`UsageError` for bad arguments, and :class:`NumericalError`
for anything that goes wrong inside a computation. The command-line front
end maps them to exit codes 1 and 2.
"""


class PTAiryError(Exception):
    pass


class UsageError(PTAiryError, ValueError):
    pass


class DomainError(UsageError):
    """Argument outside the documented working region."""


class AllNormsMissing(UsageError):
    pass


class DegenerateXi(UsageError):
    pass


class NumericalError(PTAiryError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    pass


class NonConvergence(ConvergenceError):
    pass


class DerivativeUnderflow(NumericalError):
    pass


class JacobianSingular(NumericalError):
    pass


class SingularDenominator(NumericalError):
    pass


class StepCollapse(NumericalError):
    pass


class BranchJump(NumericalError):
    """Corrector landed outside the trust radius of the predictor."""

    def __init__(self, message, eps=None, predicted=None, corrected=None):
        super().__init__(message)
        self.eps = eps
        self.predicted = predicted
        self.corrected = corrected


class NoTurning(NumericalError):
    pass


class EigensolveFailure(NumericalError):
    pass


class UnmatchedEigenvalue(NumericalError):
    pass
