"""Exception hierarchy shared by all solver modules."""


class SCSSError(Exception):
    """Base class for every error raised by this package."""


class InstanceSyntaxError(SCSSError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CountMismatch(SCSSError):
    pass


class RangeError(SCSSError):
    pass


class NotATree(SCSSError):
    pass


class CoverageViolation(SCSSError):
    pass


class ConnectivityViolation(SCSSError):
    pass


class InvalidDecomposition(SCSSError):
    pass


class CyclicInput(SCSSError):
    pass


class UniverseMismatch(SCSSError):
    pass


class ValueBoundExceeded(SCSSError):
    pass


class UniverseTooLarge(SCSSError):
    pass


class WidthTooLarge(SCSSError):
    pass


class BagMismatch(SCSSError):
    pass


class TooManyVertices(SCSSError):
    pass


class TooLarge(SCSSError):
    pass


class InternalInconsistency(SCSSError):
    pass


class InvalidReducedSolution(SCSSError):
    pass


class NoApplicableEngine(SCSSError):
    pass


class BadParams(SCSSError):
    pass
