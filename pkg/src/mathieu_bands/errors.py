"""Exception hierarchy.

Everything numerical derives from :class:`NumericalError` so the CLI can map
it to exit code 3; bad user input raises :class:`ValueError` as usual.
"""


class MathieuError(Exception):
    """Base class for all errors raised by this package."""


class NumericalError(MathieuError):
    pass


class NonConvergence(NumericalError):
    """Inverse iteration did not produce an eigenvector."""


class ExtremaMismatch(NumericalError):
    """Sampled band contradicts the band-edge rule (extrema at nu = 0, 1)."""


class BandSearchExhausted(NumericalError):
    """Characteristic value lies above every band that was computed."""


class TruncationCapExceeded(NumericalError):
    pass


class GapInconsistency(NumericalError):
    """The two printed routes to the ground-state gap disagree."""


class PoleProximity(NumericalError):
    """Evaluation point sits inside the guard band of a pole of xi."""


class BracketFailure(NumericalError):
    pass


class ShapeMismatch(MathieuError, ValueError):
    """States live on different grids (eta, nu or truncation differ)."""
