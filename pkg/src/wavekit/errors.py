"""Exception hierarchy shared across the package."""


class WavekitError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(WavekitError):
    """A construction or query parameter is outside its documented range."""


class DimensionError(ParameterError):
    """Dimension outside the supported range [2, 6]."""


class SingularMatrixError(WavekitError):
    """Exact inversion or solving was requested for a singular matrix."""


class UnboundedCellError(WavekitError):
    """An H-representation describes an unbounded set where a bounded one is required."""


class ComplexityGuardError(WavekitError):
    """A combinatorial guard (facet cap, subset count) was exceeded."""


class UnsupportedMatrixError(WavekitError):
    """The dilation matrix has no positive scalar power within the probe cap."""


class ConstructionError(WavekitError):
    """A wavelet-set construction failed; carries per-candidate diagnostics."""

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts or []


class ModeError(WavekitError):
    """Requested verification mode is incompatible with the input data."""


class InfiniteRangeError(WavekitError):
    """The dilation exponent window is unbounded (region closure reaches 0)."""
