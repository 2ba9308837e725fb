"""Floquet matrix of Mathieu's equation and the band structure it generates.

Conventions used throughout the package::

    psi'' + (a - 2 eta cos 2z) psi = 0
    psi(z) = exp(i nu z) * sum_k c_{2k} exp(2 i k z),   k = -N..N

so the truncated Floquet matrix has diagonal (2k - nu)**2 and constant
off-diagonal +eta, and its eigenvalues are the characteristic values a
themselves.  The off-diagonal sign is a gauge choice (c_k -> (-1)**k c_k
flips it without changing the spectrum).

a(nu) is even and has period 2 in nu, so every nu is folded into [0, 1]
before a matrix is built.  Band m spans [a_m, b_{m+1}]; its extrema sit at
nu = 0 and nu = 1, alternating with the parity of m.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    BandSearchExhausted,
    ExtremaMismatch,
    NonConvergence,
    TruncationCapExceeded,
)
from .tridiagonal import Tridiagonal, eigen_tridiagonal, eigenvalues_bisection

DEFAULT_TOL = 1e-10
DEFAULT_MAX_N = 4000
FD_STEP = 1e-5
# nu samples used to confirm that band extrema sit at nu = 0 and nu = 1
_EDGE_CHECK_GRID = (0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875)


def max_truncation() -> int:
    """Hard cap on N, overridable through ``MATHIEU_MAX_N``."""
    raw = os.environ.get("MATHIEU_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"MATHIEU_MAX_N must be >= 1, got {raw!r}")
    return cap


@dataclass(frozen=True)
class MathieuParams:
    """Coupling, Fourier truncation and eigenvalue tolerance.

    Use :meth:`auto` to pick a truncation that is converged to ``tol``.
    """

    eta: float
    truncation: int
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"eta must be finite and >= 0, got {self.eta!r}")
        if int(self.truncation) != self.truncation or self.truncation < 1:
            raise ValueError(f"truncation must be an integer >= 1, got {self.truncation!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol!r}")
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "truncation", int(self.truncation))

    @classmethod
    def auto(cls, eta: float, tol: float = DEFAULT_TOL) -> "MathieuParams":
        return cls(eta, truncation_for(eta, tol), tol)

    @property
    def size(self) -> int:
        return 2 * self.truncation + 1

    def kappas(self) -> np.ndarray:
        return np.arange(-self.truncation, self.truncation + 1)


@dataclass(frozen=True)
class FloquetPoint:
    band: int
    nu: float
    a: float


@dataclass(frozen=True)
class FourierState:
    """Unit Fourier coefficient vector c_{2k}, k = -N..N, of one Floquet solution."""

    nu: float
    band: int
    coeffs: np.ndarray = field(repr=False)
    eta: float = math.nan

    @property
    def truncation(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coefficient(self, kappa: int) -> float:
        return float(self.coeffs[kappa + self.truncation])


@dataclass(frozen=True)
class BandEdges:
    a_lo: float
    b_hi: float

    @property
    def width(self) -> float:
        return self.b_hi - self.a_lo


def fold_nu(nu: float) -> float:
    """Map nu into [0, 1] using a(nu) = a(-nu) = a(2 - nu)."""
    if not math.isfinite(nu):
        raise ValueError(f"nu must be finite, got {nu!r}")
    r = math.fmod(abs(nu), 2.0)
    return 2.0 - r if r > 1.0 else r


def build_floquet_matrix(p: MathieuParams, nu: float) -> Tridiagonal:
    """Truncated Floquet matrix at exponent ``nu`` (used as given, not folded)."""
    if not math.isfinite(nu):
        raise ValueError(f"nu must be finite, got {nu!r}")
    k = p.kappas()
    diag = (2.0 * k - nu) ** 2
    off = np.full(p.size - 1, p.eta)
    return Tridiagonal(diag, off)


def _check_band(p: MathieuParams, m: int):
    if int(m) != m or m < 0 or m >= p.size:
        raise ValueError(f"band index must be in [0, {p.size - 1}], got {m!r}")


def characteristic_values(p: MathieuParams, nu: float, count: int) -> np.ndarray:
    """The lowest ``count`` characteristic values at exponent ``nu``."""
    T = build_floquet_matrix(p, fold_nu(nu))
    return eigenvalues_bisection(T, count)


def characteristic_value(p: MathieuParams, nu: float, m: int) -> float:
    _check_band(p, m)
    return float(characteristic_values(p, nu, m + 1)[m])


def floquet_point(p: MathieuParams, nu: float, m: int) -> FloquetPoint:
    nu_c = fold_nu(nu)
    return FloquetPoint(m, nu_c, characteristic_value(p, nu_c, m))


def floquet_state(p: MathieuParams, nu: float, m: int) -> FourierState:
    _check_band(p, m)
    nu_c = fold_nu(nu)
    _, vecs = eigen_tridiagonal(build_floquet_matrix(p, nu_c), m + 1)
    return FourierState(nu_c, m, vecs[:, m].copy(), p.eta)


def band_edges(p: MathieuParams, m: int, check: bool = True) -> BandEdges:
    """Bottom and top of band ``m``.

    Even bands have their minimum at nu = 0, odd bands at nu = 1.  With
    ``check`` the band is also sampled in between and any value outside the
    edges (beyond ``p.tol``) raises :class:`ExtremaMismatch`.
    """
    _check_band(p, m)
    at0 = characteristic_value(p, 0.0, m)
    at1 = characteristic_value(p, 1.0, m)
    lo, hi = (at0, at1) if m % 2 == 0 else (at1, at0)
    if check:
        for nu in _EDGE_CHECK_GRID:
            a = characteristic_value(p, nu, m)
            if a < lo - p.tol or a > hi + p.tol:
                raise ExtremaMismatch(
                    f"band {m} at eta={p.eta}: a({nu})={a!r} outside [{lo!r}, {hi!r}]"
                )
    return BandEdges(lo, hi)


def bandwidth(p: MathieuParams, m: int = 0) -> float:
    return band_edges(p, m).width


def bandgap(p: MathieuParams, m: int = 0) -> float:
    """Gap between band ``m`` and band ``m + 1``."""
    return band_edges(p, m + 1).a_lo - band_edges(p, m).b_hi


def is_stable(a: float, p: MathieuParams, max_band: int = 10):
    """Whether characteristic value ``a`` gives bounded solutions.

    Returns ``(True, m)`` if ``a`` lies in band ``m`` and ``(False, None)`` if it
    lies below the ground band or inside a gap.  Raises
    :class:`BandSearchExhausted` if ``a`` is above band ``max_band``.
    """
    max_band = min(max_band, p.size - 1)
    for m in range(max_band + 1):
        e = band_edges(p, m, check=False)
        if a < e.a_lo:
            return False, None
        if a <= e.b_hi:
            return True, m
    raise BandSearchExhausted(
        f"a={a!r} lies above band {max_band} (top {e.b_hi!r}) at eta={p.eta}"
    )


def _degenerate_slope(values, vecs, dvec, m, tol):
    """Slope of band ``m`` inside a two-fold crossing (only eta = 0 has one).

    The derivative operator is diagonalised within the degenerate pair.  The
    folded exponent is approached from above at 0 and from below at 1, which
    decides which branch belongs to the lower band index.
    """
    near = [j for j in range(len(values)) if abs(values[j] - values[m]) <= tol]
    if len(near) == 1:
        return None
    if len(near) != 2:
        raise NonConvergence(f"{len(near)}-fold degeneracy at band {m}")
    i, j = near
    u, w = vecs[:, i], vecs[:, j]
    d11 = float(np.sum(dvec * u * u))
    d22 = float(np.sum(dvec * w * w))
    d12 = float(np.sum(dvec * u * w))
    mid = 0.5 * (d11 + d22)
    rad = math.hypot(0.5 * (d11 - d22), d12)
    return mid, rad, near.index(m)


def effective_voltage_numeric(p: MathieuParams, nu: float, m: int = 0) -> float:
    """da/dnu from the eigenvector (Hellmann-Feynman), exact at truncation.

    d(diag)/dnu = -2 (2k - nu), so V = -2 sum_k (2k - nu) c_{2k}**2.  The
    sign follows the folding: V is odd in nu.  At a band crossing the
    one-sided limit from inside the folded interval is returned.
    """
    _check_band(p, m)
    nu_c = fold_nu(nu)
    count = min(m + 2, p.size)
    values, vecs = eigen_tridiagonal(build_floquet_matrix(p, nu_c), count)
    dvec = -2.0 * (2.0 * p.kappas() - nu_c)
    deg = _degenerate_slope(values, vecs, dvec, m, 1e-9 * max(1.0, abs(values[m])))
    if deg is None:
        v = float(np.sum(dvec * vecs[:, m] ** 2))
    else:
        mid, rad, pos = deg
        # lower member of the pair: smaller slope when leaving nu = 0 upward,
        # larger slope when arriving at nu = 1 from below
        lower_gets_min = nu_c < 0.5
        sign = -1.0 if (pos == 0) == lower_gets_min else 1.0
        v = mid + sign * rad
    # a(nu) is even about 0 and about 1, so dV flips sign on mirrored branches
    r = math.fmod(nu, 2.0)
    if r < 0:
        r += 2.0
    return -v if r > 1.0 else v


def effective_voltage_fd(p: MathieuParams, nu: float, m: int = 0, h: float = FD_STEP) -> float:
    """Central finite difference of the characteristic value."""
    return (characteristic_value(p, nu + h, m) - characteristic_value(p, nu - h, m)) / (2 * h)


def _floor_truncation(eta: float) -> int:
    return math.ceil(2.0 + 2.0 * math.sqrt(eta)) + 8


def _ground_edges(eta: float, n: int) -> tuple[float, float]:
    p = MathieuParams(eta, n)
    a0 = characteristic_value(p, 0.0, 0)
    b1 = characteristic_value(p, 1.0, 0)
    return a0, b1


@lru_cache(maxsize=512)
def _truncation_for(eta: float, tol: float, cap: int) -> int:
    n = _floor_truncation(eta)
    while n + 5 <= cap:
        a0, b1 = _ground_edges(eta, n)
        a0_next, b1_next = _ground_edges(eta, n + 5)
        if max(abs(a0 - a0_next), abs(b1 - b1_next)) < tol:
            return n
        n *= 2
    raise TruncationCapExceeded(
        f"no converged truncation for eta={eta} tol={tol} below cap N={cap}"
    )


def truncation_for(eta: float, tol: float = DEFAULT_TOL) -> int:
    """Smallest N in a doubling search (from the floor ceil(2 + 2 sqrt(eta)) + 8)
    such that a_0 and b_1 move by less than ``tol`` when N -> N + 5."""
    if not (math.isfinite(eta) and eta >= 0):
        raise ValueError(f"eta must be finite and >= 0, got {eta!r}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    return _truncation_for(float(eta), float(tol), max_truncation())
