"""Closed-form approximations to characteristic values, gaps and bandwidths.

Small coupling: McLachlan power series in eta.  Large coupling: Frenkel-Portugal
expansion in 1/sqrt(eta), the tight-binding bandwidth and harmonic-oscillator
levels and matrix elements.  Coefficients are kept as exact fractions, exactly
as printed in the literature; none of the evaluators clamp eta to a regime of
validity.  Comparing against :mod:`mathieu_bands.core` is the caller's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F

from .errors import GapInconsistency

REL_FLOOR = 1e-300


@dataclass(frozen=True)
class SeriesCoefficients:
    """Polynomial coefficients, lowest power first, in powers of ``variable``."""

    method: str
    coefficients: tuple[F, ...]
    variable: str = "eta"

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + float(c)
        return acc


MCLACHLAN_A0 = SeriesCoefficients(
    "mclachlan_a0",
    (F(0), F(0), F(-1, 2), F(0), F(7, 128), F(0), F(-29, 2304), F(0), F(68687, 18874368)),
)

MCLACHLAN_B1 = SeriesCoefficients(
    "mclachlan_b1",
    (
        F(1), F(-1), F(-1, 8), F(1, 64), F(-1, 1536), F(-11, 36864),
        F(49, 589824), F(-55, 9437184), F(-265, 113246208),
    ),
)

# a_n as a polynomial in n for each power of eta: eta, sqrt(eta), 1, 1/sqrt(eta), 1/eta
FP_AN = {
    "eta": SeriesCoefficients("fp_an", (F(-2),), "n"),
    "sqrt_eta": SeriesCoefficients("fp_an", (F(2), F(4)), "n"),
    "const": SeriesCoefficients("fp_an", (F(-1, 4), F(-1, 2), F(-1, 2)), "n"),
    "inv_sqrt_eta": SeriesCoefficients(
        "fp_an", (F(-1, 32), F(-3, 32), F(-3, 32), F(-1, 16)), "n"
    ),
    "inv_eta": SeriesCoefficients(
        "fp_an", (F(-11, 256), F(-3, 256), F(-1, 16), F(0), F(-5, 256)), "n"
    ),
}

# printed ground-state gap: 4 sqrt(eta) - 1 - 1/(4 sqrt(eta)) - 17/(128 eta)
FP_GAP0 = SeriesCoefficients(
    "fp_gap", (F(4), F(-1), F(-1, 4), F(-17, 128)), "sqrt(eta)**(1-k)"
)

TB_PREFACTOR = 16.0 * math.sqrt(2.0 / math.pi)
# prefactor of the junction-notation t0 = 32 sqrt(E_J E_C / pi) (E_J/2E_C)**(1/4) ...
# rewritten with eta = E_J / 2E_C and measured in units of E_C
TB_PREFACTOR_T0 = 32.0 * math.sqrt(2.0 / math.pi)


def mclachlan_a0(eta: float) -> float:
    return MCLACHLAN_A0(eta)


def mclachlan_b1(eta: float) -> float:
    return MCLACHLAN_B1(eta)


def mclachlan_a1(eta: float) -> float:
    """a_1 is the b_1 series with eta -> -eta."""
    return MCLACHLAN_B1(-eta)


def mclachlan_bandwidth(eta: float) -> float:
    return mclachlan_b1(eta) - mclachlan_a0(eta)


def mclachlan_gap(eta: float) -> float:
    return mclachlan_a1(eta) - mclachlan_b1(eta)


def _check_positive(eta):
    if not eta > 0:
        raise ValueError(f"large-eta expansion needs eta > 0, got {eta!r}")


def fp_characteristic(eta: float, n: int = 0) -> float:
    """Frenkel-Portugal expansion of the (thin) band n, through order 1/eta.

    Accuracy improves with eta and gets worse with n.
    """
    _check_positive(eta)
    s = math.sqrt(eta)
    return (
        FP_AN["eta"](n) * eta
        + FP_AN["sqrt_eta"](n) * s
        + FP_AN["const"](n)
        + FP_AN["inv_sqrt_eta"](n) / s
        + FP_AN["inv_eta"](n) / eta
    )


def _fp_gap_terms(n: int) -> tuple[float, float, float, float]:
    n = F(n)
    sqrt_term = F(4)
    const = -1 - n
    half = -(F(3, 32) + F(3, 32) * (2 * n + 1) + (3 * n**2 + 3 * n + 1) / 16)
    inv = -(
        F(3, 256)
        + (2 * n + 1) / 16
        + F(5, 128) * (3 * n**2 + 3 * n + 1)
        + F(5, 256) * (4 * n**3 + 5 * n**2 + 4 * n + 1)
    )
    return sqrt_term, const, half, inv


def fp_gap(eta: float, n: int = 0) -> float:
    """Gap delta_n = a_{n+1} - a_n from the printed general-n expansion."""
    _check_positive(eta)
    c_sqrt, c0, c_half, c_inv = (float(c) for c in _fp_gap_terms(n))
    s = math.sqrt(eta)
    return c_sqrt * s + c0 + c_half / s + c_inv / eta


def fp_gap0(eta: float, check: bool = True) -> float:
    """Gap above the ground band, 4 sqrt(eta) - 1 - 1/(4 sqrt(eta)) - 17/(128 eta).

    With ``check`` the value is compared against ``fp_gap(eta, 0)``; the two
    printed forms must agree or :class:`GapInconsistency` is raised.
    """
    _check_positive(eta)
    s = math.sqrt(eta)
    c = [float(x) for x in FP_GAP0.coefficients]
    value = c[0] * s + c[1] + c[2] / s + c[3] / eta
    if check:
        other = fp_gap(eta, 0)
        if abs(other - value) > 1e-12 * max(1.0, abs(value)):
            raise GapInconsistency(f"fp_gap(eta, 0)={other!r} but fp_gap0={value!r}")
    return value


def ho_gap(eta: float) -> float:
    """Lowest-order gap 4 sqrt(eta), i.e. the plasma frequency in units of E_C."""
    return 4.0 * math.sqrt(eta)


def ho_gap_shifted(eta: float) -> float:
    """Gap through order eta**0: 4 sqrt(eta) - 1."""
    return 4.0 * math.sqrt(eta) - 1.0


def tb_bandwidth(eta: float) -> float:
    """Tight-binding ground bandwidth 16 sqrt(2/pi) eta**(3/4) exp(-4 sqrt(eta))."""
    _check_positive(eta)
    return math.exp(log_tb_bandwidth(eta))


def log_tb_bandwidth(eta: float) -> float:
    """Natural log of :func:`tb_bandwidth`; safe where the value underflows."""
    _check_positive(eta)
    return math.log(TB_PREFACTOR) + 0.75 * math.log(eta) - 4.0 * math.sqrt(eta)


def tb_bandwidth_t0(eta: float) -> float:
    """Bandwidth from the junction-notation t0 formula, in units of E_C.

    Same functional form as :func:`tb_bandwidth` with prefactor 32 instead of
    16; the two printed forms are not consistent with each other.
    """
    _check_positive(eta)
    return math.exp(math.log(TB_PREFACTOR_T0) + 0.75 * math.log(eta) - 4.0 * math.sqrt(eta))


def ho_energy(eta: float, n: int = 0) -> float:
    """Harmonic-oscillator level 4 sqrt(eta) (n + 1/2) - 2 eta."""
    return 4.0 * math.sqrt(eta) * (n + 0.5) - 2.0 * eta


def ho_z_nm(eta: float, n: int, m: int) -> float:
    """<n| z |m> for oscillator states: eta**-1/4 (sqrt(n+1) d_{n+1,m} + sqrt(n) d_{n-1,m})."""
    _check_positive(eta)
    if m == n + 1:
        amp = math.sqrt(n + 1)
    elif m == n - 1:
        amp = math.sqrt(n)
    else:
        return 0.0
    return eta**-0.25 * amp


def ho_z2_nm(eta: float, n: int, m: int) -> float:
    """<n| z**2 |m> for oscillator states."""
    _check_positive(eta)
    if n == m - 2:
        amp = math.sqrt((n + 1) * (n + 2))
    elif n == m + 2:
        amp = math.sqrt(n * (n - 1))
    elif n == m:
        amp = 2.0 * (n + 0.5)
    else:
        return 0.0
    return eta**-0.5 * amp


@dataclass(frozen=True)
class ApproxReport:
    method: str
    eta: float
    value: float
    reference: float
    abs_err: float
    rel_err: float

    @classmethod
    def compare(cls, method: str, eta: float, value: float, reference: float) -> "ApproxReport":
        err = abs(value - reference)
        return cls(method, eta, value, reference, err, err / max(abs(reference), REL_FLOOR))
