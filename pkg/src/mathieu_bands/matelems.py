"""Matrix elements of phi, phi^2, cos(phi), sin(phi) between Floquet states.

Elements are taken in the junction phase variable phi in [-pi, pi] with an
integer charge basis.  A Mathieu state from :mod:`mathieu_bands.core`,

    psi(z) = exp(i nu z) sum_k c_{2k} exp(2 i k z),

maps onto that basis with phi = 2z + pi and q = nu / 2:

    psi(phi) = exp(i q phi) sum_k (-1)^k c_{2k} exp(i k phi).

The pi shift moves the potential minimum of a - 2 eta cos 2z to phi = 0,
which is where the oscillator states of the tight-binding limit live.  The
common factor exp(i q phi) cancels in every element, so only the re-signed
coefficients enter.

With p = k - k' (bra index minus ket index) the kernels are

    phi:    i (-1)^p / p          (0 for p = 0)
    phi^2:  2 (-1)^p / p^2        (pi^2 / 3 for p = 0)

and cos / sin shift the charge index by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .asymptotics import ho_z2_nm, ho_z_nm
from .core import FourierState, MathieuParams, floquet_state
from .errors import ShapeMismatch

# the ladder-operator forms are amplitudes of the phase itself
# (phi_zpf = eta**-1/4), so they compare to the phi-basis elements unscaled;
# elements of the Mathieu coordinate z are half of these
HO_PHASE_SCALE = 1.0
Z_PER_PHASE = 0.5


@dataclass(frozen=True)
class MatrixElementResult:
    operator: str
    n: int
    m: int
    nu: float
    value: complex


def phase_coefficients(state: FourierState) -> np.ndarray:
    """Coefficients of ``state`` in the phase basis: (-1)^k c_{2k}."""
    N = state.truncation
    k = np.arange(-N, N + 1)
    return np.where(k % 2 == 0, 1.0, -1.0) * state.coeffs


def _check_pair(bra: FourierState, ket: FourierState):
    if len(bra.coeffs) != len(ket.coeffs):
        raise ShapeMismatch(
            f"truncations differ: {bra.truncation} vs {ket.truncation}"
        )
    if bra.nu != ket.nu:
        raise ShapeMismatch(f"states at different nu: {bra.nu} vs {ket.nu}")
    if not (math.isnan(bra.eta) and math.isnan(ket.eta)) and bra.eta != ket.eta:
        raise ShapeMismatch(f"states at different eta: {bra.eta} vs {ket.eta}")


@lru_cache(maxsize=32)
def _kernels(N: int):
    k = np.arange(-N, N + 1)
    p = (k[:, None] - k[None, :]).astype(float)
    sign = np.where(np.abs(p) % 2 == 0, 1.0, -1.0)
    off = p != 0
    safe = np.where(off, p, 1.0)
    phi = np.where(off, 1j * sign / safe, 0.0)
    phi2 = np.where(off, 2.0 * sign / safe**2, math.pi**2 / 3.0)
    return phi, phi2


def _sandwich(kernel, bra, ket) -> complex:
    u = phase_coefficients(bra)
    v = phase_coefficients(ket)
    return complex(np.conj(u) @ kernel @ v)


def z_nm(bra: FourierState, ket: FourierState) -> complex:
    """<bra| phi |ket>."""
    _check_pair(bra, ket)
    return _sandwich(_kernels(bra.truncation)[0], bra, ket)


def z2_nm(bra: FourierState, ket: FourierState) -> complex:
    """<bra| phi^2 |ket>, including the pi^2/3 diagonal of the kernel."""
    _check_pair(bra, ket)
    return _sandwich(_kernels(bra.truncation)[1], bra, ket)


def cos_nm(bra: FourierState, ket: FourierState) -> complex:
    """<bra| cos phi |ket> = 1/2 sum_k conj(u_k) (v_{k-1} + v_{k+1})."""
    _check_pair(bra, ket)
    u = np.conj(phase_coefficients(bra))
    v = phase_coefficients(ket)
    return complex(0.5 * (u[1:] @ v[:-1] + u[:-1] @ v[1:]))


def sin_nm(bra: FourierState, ket: FourierState) -> complex:
    """<bra| sin phi |ket> = -i/2 sum_k conj(u_k) (v_{k-1} - v_{k+1})."""
    _check_pair(bra, ket)
    u = np.conj(phase_coefficients(bra))
    v = phase_coefficients(ket)
    return complex(-0.5j * (u[1:] @ v[:-1] - u[:-1] @ v[1:]))


OPERATORS = {"z": z_nm, "z2": z2_nm, "cos": cos_nm, "sin": sin_nm}


def matrix_element(op: str, p: MathieuParams, nu: float, n: int, m: int) -> MatrixElementResult:
    try:
        fn = OPERATORS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}; choose from {sorted(OPERATORS)}") from None
    bra = floquet_state(p, nu, n)
    ket = bra if m == n else floquet_state(p, nu, m)
    return MatrixElementResult(op, n, m, bra.nu, fn(bra, ket))


def ho_reference(op: str, eta: float, n: int, m: int) -> float:
    """Oscillator value of |<n|phi|m>| or <n|phi^2|m> in the phase convention above."""
    if op == "z":
        return HO_PHASE_SCALE * ho_z_nm(eta, n, m)
    if op == "z2":
        return HO_PHASE_SCALE**2 * ho_z2_nm(eta, n, m)
    raise ValueError(f"no oscillator closed form for operator {op!r}")
