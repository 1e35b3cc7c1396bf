"""Exception hierarchy shared by all modules."""


class ZetaGapError(Exception):
    """Base class for every error raised by the package."""


class PoleError(ZetaGapError, ValueError):
    pass


class AccuracyError(ZetaGapError):
    """Requested tolerance cannot be met in double precision."""


class PathThroughZeroError(ZetaGapError):
    pass


class CompletenessError(ZetaGapError):
    """A zero search recovered a different number of zeros than its certificate."""


class ContourTooCloseError(ZetaGapError):
    pass


class NonConvergentContourError(ZetaGapError):
    pass


class DivergenceError(ZetaGapError):
    pass


class ZeroDerivativeError(ZetaGapError):
    pass


class MultiplicityUnsupportedError(ZetaGapError):
    pass


class IncompleteZeroListError(ZetaGapError):
    pass


class InsufficientCoverageError(ZetaGapError):
    pass


class NoRootError(ZetaGapError):
    pass
