"""Exception types raised by the solvers."""


class UnimonError(Exception):
    """Base class for numerical failures."""


class ParameterError(UnimonError, ValueError):
    """Invalid physical parameters."""


class OutOfDomain(UnimonError, ValueError):
    pass


class NonConvergence(UnimonError):
    pass


class InsufficientScanRange(UnimonError):
    pass


class GridTooSmall(UnimonError):
    pass


class ConvergenceNotReached(UnimonError):
    pass


class ParityViolation(UnimonError):
    pass


class NegativeEffectiveCapacitance(UnimonError):
    pass


class TruncationNotConverged(UnimonError):
    pass


class ResonantDivergence(UnimonError):
    pass


class UnidentifiableParameters(UnimonError):
    pass


class InsufficientPoints(UnimonError, ValueError):
    pass


class DegenerateDesign(UnimonError, ValueError):
    pass


class ConfigError(UnimonError, ValueError):
    """Config file failed validation; message carries the field path."""


class DegenerateEnvelope(UserWarning):
    """The textbook amplitude ratio is 0/0; the envelope was rebuilt from the null vector."""


class DispersiveRegimeWarning(UserWarning):
    pass
