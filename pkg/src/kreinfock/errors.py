"""Exception hierarchy shared by all modules."""


class KreinFockError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(KreinFockError, ValueError):
    pass


class MetricInvalid(KreinFockError, ValueError):
    """A candidate metric is not a selfadjoint unitary within tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NonSquare(MetricInvalid):
    pass


class NotSelfadjoint(MetricInvalid):
    pass


class NotInvolutive(MetricInvalid):
    pass


class NotUnitary(KreinFockError, ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SizeOverflow(KreinFockError, MemoryError):
    pass


class BasisMismatch(KreinFockError, ValueError):
    pass


class CutoffTooSmall(KreinFockError, ValueError):
    pass


class UnknownModel(KreinFockError, KeyError):
    pass


class BadParams(KreinFockError, ValueError):
    pass


class ConfigInvalid(KreinFockError, ValueError):
    pass


class ModelBuildFailed(KreinFockError, RuntimeError):
    pass


class ParseError(KreinFockError, ValueError):
    pass


class SchemaError(KreinFockError, ValueError):
    pass
