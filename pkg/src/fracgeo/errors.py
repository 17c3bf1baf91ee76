"""Exception hierarchy shared across the package.

Every raised error is one of these, so callers (and the CLI) can map
failure classes to exit codes without string matching.
"""


class FracGeoError(Exception):
    """Base class for all package errors."""


class DomainError(FracGeoError):
    """An argument lies outside the mathematical domain of an operation."""


class ParameterError(FracGeoError):
    """A structurally invalid parameter (bad shapes, ranges, flag combos)."""


class RepresentationError(FracGeoError):
    """A geometric representation is inconsistent or unusable
    (H-rep/V-rep mismatch, origin not interior, degenerate hull)."""


class DegenerateInputError(FracGeoError):
    """Input collapses to measure zero or is otherwise degenerate."""


class QuadratureFailure(FracGeoError):
    """Adaptive integration did not converge.

    Carries the last two estimates so the caller can judge how far apart
    they are.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class ConsistencyError(FracGeoError):
    """A computed object violates an invariant it is contracted to satisfy."""


class FormatError(FracGeoError):
    """A file does not parse as the format it claims (bad JSON, unknown
    descriptor kind, missing keys, malformed binary header, CSV shape)."""


class UnsupportedError(FracGeoError):
    """A valid request outside the implemented desk-scale envelope."""
