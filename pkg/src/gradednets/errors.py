"""Exception hierarchy shared by every module."""


class GradedNetsError(Exception):
    """Base class for all library errors."""


class InputError(GradedNetsError, ValueError):
    """Malformed user input (bad JSON, unknown labels, wrong shapes)."""


class DuplicateLabel(InputError):
    pass


class UnknownElement(InputError):
    pass


class AntisymmetryViolation(InputError):
    pass


class SizeBound(GradedNetsError):
    pass


class NotPathConnected(GradedNetsError):
    pass


class NotComparable(GradedNetsError):
    pass


class NotALoop(GradedNetsError):
    pass


class NotDirected(GradedNetsError):
    pass


class NotCertified(GradedNetsError):
    pass


class NotComparableCycles(GradedNetsError):
    pass


class IncoherentNet(InputError):
    pass


class BasepointMismatch(GradedNetsError):
    pass


class NonConvergence(GradedNetsError):
    pass


class NotComparableInCorona(GradedNetsError):
    pass


class MorphismInvalid(GradedNetsError):
    pass


class NoContainingBlock(GradedNetsError):
    pass
