"""Exception hierarchy.

Every domain error carries a machine-readable ``code`` (the class name) so the
CLI can report it without string matching.
"""


class AzumayaError(Exception):
    exit_status = 2

    @property
    def code(self):
        return type(self).__name__


class InvalidRing(AzumayaError):
    pass


class IncompatibleRings(AzumayaError):
    pass


class NotAUnit(AzumayaError):
    pass


class TooLarge(AzumayaError):
    exit_status = 3


class InvalidDegree(AzumayaError):
    pass


class SingularGram(AzumayaError):
    pass


class WrongSymmetry(AzumayaError):
    pass


class MalformedInvolution(AzumayaError):
    pass


class ExcludedTriality(AzumayaError):
    pass


class NotAbsolutelySimple(AzumayaError):
    pass


class UnsupportedBaseChange(AzumayaError):
    pass


class CenterNotSplit(AzumayaError):
    pass


class InvalidCocycle(AzumayaError):
    pass


class Unsupported(AzumayaError):
    pass
