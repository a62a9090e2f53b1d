"""Exception hierarchy shared by all zipfcover modules."""


class ZipfCoverError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class DomainError(ZipfCoverError, ValueError):
    pass


class NoRootError(ZipfCoverError):
    pass


class NoConvergence(ZipfCoverError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EmptyInput(ZipfCoverError, ValueError):
    pass


class InsufficientData(ZipfCoverError, ValueError):
    pass


class RankOutOfRange(ZipfCoverError, IndexError):
    pass


class DepthTooLarge(ZipfCoverError, ValueError):
    pass


class InsufficientMass(ZipfCoverError, ValueError):
    pass


class EmptyCovering(ZipfCoverError, ValueError):
    pass


class DegenerateDistribution(ZipfCoverError, ValueError):
    pass


class StreamTooShort(ZipfCoverError, ValueError):
    pass


class EmptyTable(ZipfCoverError, ValueError):
    pass


class DegenerateMatrix(ZipfCoverError, ValueError):
    pass


class UnknownFixture(ZipfCoverError, KeyError):
    pass


class ChecksumMismatch(ZipfCoverError):
    pass


class ParseError(ZipfCoverError, ValueError):
    pass
