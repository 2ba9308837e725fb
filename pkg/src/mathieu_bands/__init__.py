"""Band structure of the Mathieu equation y'' + (a - 2 eta cos 2z) y = 0.

Floquet characteristic values, band edges and effective voltages from an
in-house tridiagonal eigensolver, with Hill-determinant cross-checks,
small- and large-eta closed forms, and matrix elements in the phase basis.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BandEdges,
    FloquetPoint,
    FourierState,
    MathieuParams,
    band_edges,
    bandgap,
    bandwidth,
    build_floquet_matrix,
    characteristic_value,
    characteristic_values,
    effective_voltage_fd,
    effective_voltage_numeric,
    floquet_point,
    floquet_state,
    fold_nu,
    is_stable,
    truncation_for,
)
from .errors import MathieuError, NumericalError  # noqa: E402

__all__ = [
    "BandEdges", "FloquetPoint", "FourierState", "MathieuParams",
    "MathieuError", "NumericalError",
    "band_edges", "bandgap", "bandwidth", "build_floquet_matrix",
    "characteristic_value", "characteristic_values", "effective_voltage_fd",
    "effective_voltage_numeric", "floquet_point", "floquet_state", "fold_nu",
    "is_stable", "truncation_for", "__version__",
]
