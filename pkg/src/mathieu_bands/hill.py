"""Hill determinant and the Whittaker-Hill relation between a and nu.

The normalised Floquet recursion reads

    c_{2k} + xi_{2k} (c_{2k+2} + c_{2k-2}) = 0,   xi_{2k} = eta / ((2k - nu)**2 - a)

and Delta_n(a, nu) is the determinant of its (2n+1)-row truncation (unit
diagonal, xi_{2k} on both off-diagonals of row k).  The Whittaker-Hill
formula

    sin(pi nu / 2)**2 = Delta(a, 0) sin(pi sqrt(a) / 2)**2

then links exponent and characteristic value; for a < 0 the sine becomes
i sinh, so the right-hand side is -Delta sinh(pi sqrt(-a) / 2)**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketFailure, PoleProximity

POLE_GUARD = 1e-10
DEFAULT_F_COEF = 1.2
# continuant length used before the analytic tail correction is applied
DEFAULT_DET_TRUNCATION = 200
# s = Delta * sin^2 within this distance outside [0, 1] is rounding, not a gap
S_SLACK = 1e-12


@dataclass(frozen=True)
class HillEvaluation:
    a: float
    eta: float
    nu: float
    n: int
    delta: float


@dataclass(frozen=True)
class InstabilityMark:
    """Returned instead of nu when a lies in a gap (complex exponent).

    ``s`` is Delta(a, 0) sin^2(pi sqrt(a) / 2), which lies outside [0, 1].
    """

    a: float
    eta: float
    s: float


def xi(kappa: int, nu: float, a: float, eta: float) -> float:
    denom = (2 * kappa - nu) ** 2 - a
    if abs(denom) < POLE_GUARD:
        raise PoleProximity(
            f"(2*{kappa} - {nu})^2 - a = {denom!r} is within {POLE_GUARD} of a pole"
        )
    return eta / denom


def hill_det_direct(a: float, eta: float, nu: float, n: int) -> float:
    """Determinant of the (2n+1)-row matrix A_n by the three-term continuant.

    Works for any nu; at nu = 0 it is the oracle for :func:`hill_det_recursive`.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0 or eta == 0.0:
        return 1.0
    # prev2, prev = determinants of the empty and the one-row leading block
    prev2, prev = 1.0, 1.0
    xi_prev = xi(-n, nu, a, eta)
    for kappa in range(-n + 1, n + 1):
        xi_k = xi(kappa, nu, a, eta)
        prev2, prev = prev, prev - xi_k * xi_prev * prev2
        xi_prev = xi_k
    return prev


def hill_det_recursive(a: float, eta: float, n: int) -> float:
    """Delta_n(a, 0) from the symmetric recursion

        Delta_n = (1 - al_n) Delta_{n-1} - al_n (1 - al_n) Delta_{n-2} + al_n al_{n-1}^2 Delta_{n-3}

    with al_n = xi_{2n} xi_{2n-2}, Delta_{<0} = 0, Delta_0 = 1, Delta_1 = 1 - 2 al_1.
    Only valid at nu = 0, where xi_{-2k} = xi_{2k}.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0 or eta == 0.0:
        return 1.0

    def alpha(k):
        return xi(k, 0.0, a, eta) * xi(k - 1, 0.0, a, eta)

    al_prev = alpha(1)
    d3, d2, d1 = 0.0, 1.0, 1.0 - 2.0 * al_prev
    for k in range(2, n + 1):
        al = alpha(k)
        d = (1.0 - al) * d1 - al * (1.0 - al) * d2 + al * al_prev**2 * d3
        d3, d2, d1 = d2, d1, d
        al_prev = al
    return d1


def hill_det_small_eta(a: float, eta: float, N: int) -> float:
    """Order-eta^2 truncation: 1 - 2 sum_{k=1}^{N} eta^2 / ([(2k)^2 - a][(2k-2)^2 - a])."""
    if eta == 0.0:
        return 1.0
    total = 0.0
    for k in range(1, N + 1):
        total += xi(k, 0.0, a, eta) * xi(k - 1, 0.0, a, eta)
    return 1.0 - 2.0 * total


def _trigamma_asymptotic(x: float) -> float:
    # fine for x >= 50 (error far below double precision)
    x2 = x * x
    return 1 / x + 1 / (2 * x2) + 1 / (6 * x2 * x) - 1 / (30 * x2 * x2 * x) + 1 / (42 * x2**3 * x)


def _tail_sum(eta: float, n: int) -> float:
    """sum_{k > n} xi_{2k} xi_{2k-2} at nu = 0, using xi ~ eta / (2k)^2.

    1 / (k^2 (k-1)^2) = 1/(k-1)^2 + 1/k^2 - 2/(k(k-1)), so the sum is a pair
    of trigamma values minus a telescoping series.
    """
    s = _trigamma_asymptotic(n) + _trigamma_asymptotic(n + 1) - 2.0 / n
    return eta * eta / 16.0 * s


def hill_determinant(a: float, eta: float, n: int = DEFAULT_DET_TRUNCATION) -> HillEvaluation:
    """Delta(a, 0) of the infinite matrix.

    Continuant over |k| <= n, then the remaining rows folded in to leading
    order: each further pair of rows multiplies Delta by (1 - 2 al_k), and the
    a-dependence of al_k is dropped (relative error ~ a / n^2).
    """
    if n < 50:
        raise ValueError("tail correction assumes n >= 50")
    delta = hill_det_direct(a, eta, 0.0, n)
    if eta != 0.0:
        delta *= 1.0 - 2.0 * _tail_sum(eta, n)
    return HillEvaluation(a, eta, 0.0, n, delta)


def _sin2_half_sqrt(a: float) -> float:
    # sin^2(pi sqrt(a) / 2), continued to a < 0 as -sinh^2(pi sqrt(-a) / 2)
    if a >= 0:
        return math.sin(0.5 * math.pi * math.sqrt(a)) ** 2
    return -math.sinh(0.5 * math.pi * math.sqrt(-a)) ** 2


def whittaker_hill_s(a: float, eta: float, det_truncation: int = DEFAULT_DET_TRUNCATION) -> float:
    """Right-hand side Delta(a, 0) sin^2(pi sqrt(a) / 2), equal to sin^2(pi nu / 2)."""
    return hill_determinant(a, eta, det_truncation).delta * _sin2_half_sqrt(a)


def whittaker_hill_nu(a: float, eta: float, det_truncation: int = DEFAULT_DET_TRUNCATION):
    """Floquet exponent in [0, 1] for characteristic value ``a``.

    Returns an :class:`InstabilityMark` when ``a`` lies in a gap.
    """
    s = whittaker_hill_s(a, eta, det_truncation)
    if -S_SLACK <= s < 0.0:
        s = 0.0
    elif 1.0 < s <= 1.0 + S_SLACK:
        s = 1.0
    if not 0.0 <= s <= 1.0:
        return InstabilityMark(a, eta, s)
    return (2.0 / math.pi) * math.asin(math.sqrt(s))


def cosh_form(a: float, eta: float, det_truncation: int = DEFAULT_DET_TRUNCATION) -> float:
    """1 - 2 Delta(a, 0) sin^2(pi sqrt(a) / 2), which equals cos(pi nu) on a band."""
    return 1.0 - 2.0 * whittaker_hill_s(a, eta, det_truncation)


def _residual(a, target, eta, det_truncation):
    try:
        return target - whittaker_hill_s(a, eta, det_truncation)
    except PoleProximity:
        # Delta * sin^2 is finite across the poles of xi; step off the guard band
        return target - whittaker_hill_s(a + 4 * POLE_GUARD, eta, det_truncation)


def characteristic_from_nu(
    nu: float,
    eta: float,
    m: int,
    bracket: tuple[float, float],
    xtol: float = 1e-10,
    det_truncation: int = DEFAULT_DET_TRUNCATION,
) -> float:
    """Invert the Whittaker-Hill formula for a inside band ``m`` by bisection.

    ``bracket`` is the band's (bottom, top), usually from
    :func:`mathieu_bands.core.band_edges`.  It is widened slightly so
    roots sitting exactly on an edge (nu = 0 or 1) still show a sign change.
    """
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu!r}")
    lo, hi = bracket
    pad = 1e-9 * max(1.0, hi - lo)
    lo, hi = lo - pad, hi + pad
    target = math.sin(0.5 * math.pi * nu) ** 2
    f_lo = _residual(lo, target, eta, det_truncation)
    f_hi = _residual(hi, target, eta, det_truncation)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketFailure(
            f"no sign change for nu={nu} on band {m} in [{lo!r}, {hi!r}] "
            f"(residuals {f_lo!r}, {f_hi!r})"
        )
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = _residual(mid, target, eta, det_truncation)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def effective_voltage_semianalytic(eta: float, nu: float, f_coef: float = DEFAULT_F_COEF) -> float:
    """Interpolating formula for da/dnu on the ground band.

        V = (4/pi) asin( sin(pi nu) / (sqrt(f + 2) sqrt(f + 1 + cos(pi nu))) ),  f = f_coef eta^2

    The angle is pi * nu so that eta = 0 gives V = 2 nu.  Written with
    half angles, f + 1 + cos(pi nu) = f + 2 cos^2(pi nu / 2), which keeps the
    eta = 0 limit finite at nu = 1 (value 2, the limit from inside the band).
    """
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu!r}")
    f = f_coef * eta * eta
    half = 0.5 * math.pi * nu
    c = math.cos(half)
    s = math.sin(half)
    denom = math.sqrt(f + 2.0) * math.sqrt(f + 2.0 * c * c)
    if denom == 0.0:
        return 2.0
    arg = 2.0 * s * c / denom
    return (4.0 / math.pi) * math.asin(min(1.0, max(-1.0, arg)))
