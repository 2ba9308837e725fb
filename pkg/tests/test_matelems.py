import math

import numpy as np
import pytest

from mathieu_bands.core import FourierState, MathieuParams, floquet_state
from mathieu_bands.errors import ShapeMismatch
from mathieu_bands.matelems import (
    OPERATORS,
    cos_nm,
    ho_reference,
    matrix_element,
    phase_coefficients,
    sin_nm,
    z2_nm,
    z_nm,
)


def mode(N, k, nu=0.0, eta=0.0):
    c = np.zeros(2 * N + 1)
    c[k + N] = 1.0
    return FourierState(nu, 0, c, eta)


def states(eta, nu, count=4, N=None):
    p = MathieuParams(eta, N) if N else MathieuParams.auto(eta)
    return [floquet_state(p, nu, m) for m in range(count)]


class TestSingleModes:
    def test_z_kernel(self):
        # the phase basis re-signs mode k by (-1)^k, which cancels the kernel sign
        N = 4
        for k in range(-2, 3):
            for p in (-3, -1, 1, 2, 3):
                if abs(k - p) <= N:
                    assert z_nm(mode(N, k), mode(N, k - p)) == pytest.approx(1j / p, abs=1e-15)

    def test_z2_diagonal(self):
        assert z2_nm(mode(3, 0), mode(3, 0)) == pytest.approx(math.pi**2 / 3, abs=1e-14)

    def test_cos_between_same_mode(self):
        assert cos_nm(mode(3, 0), mode(3, 0)) == 0
        assert abs(cos_nm(mode(3, 0), mode(3, 1))) == pytest.approx(0.5)
        assert abs(sin_nm(mode(3, 0), mode(3, 1))) == pytest.approx(0.5)

    def test_eta0_ground_state(self):
        g = states(0.0, 0.0, 1)[0]
        assert z2_nm(g, g).real == pytest.approx(math.pi**2 / 3, abs=1e-12)
        assert cos_nm(g, g) == pytest.approx(0, abs=1e-12)

    def test_phase_coefficients(self):
        s = FourierState(0.0, 0, np.ones(5), 0.0)
        assert list(phase_coefficients(s)) == [1, -1, 1, -1, 1]


class TestSymmetry:
    @pytest.mark.parametrize("eta", [0.5, 3.0, 12.0])
    @pytest.mark.parametrize("nu", [0.0, 0.3, 0.7, 1.0])
    def test_hermitian(self, eta, nu):
        st = states(eta, nu)
        for fn in OPERATORS.values():
            for a in st:
                for b in st:
                    assert abs(fn(a, b) - np.conj(fn(b, a))) < 1e-10

    @pytest.mark.parametrize("eta", [0.0, 1.0, 4.0, 16.0])
    def test_parity_rules(self, eta):
        # at eta = 0 bands 1 and 2 are degenerate; use a band pair without mixing
        st = states(eta, 0.0, 1 if eta == 0 else 5)
        for n, a in enumerate(st):
            for m, b in enumerate(st):
                if (n - m) % 2 == 0:
                    assert abs(z_nm(a, b)) < 1e-12
                    assert abs(sin_nm(a, b)) < 1e-12
                else:
                    assert abs(z2_nm(a, b)) < 1e-12
                    assert abs(cos_nm(a, b)) < 1e-12

    def test_phase_types(self):
        a, b = states(4.0, 0.0, 2)
        assert z_nm(a, b).real == pytest.approx(0, abs=1e-14)
        assert z2_nm(a, a).imag == 0
        assert cos_nm(a, a).imag == 0
        assert sin_nm(a, b).real == pytest.approx(0, abs=1e-14)


class TestConvergence:
    @pytest.mark.parametrize("eta", [0.5, 4.0, 10.0])
    def test_truncation(self, eta):
        N = MathieuParams.auto(eta).truncation
        lo = states(eta, 0.3, 3, N)
        hi = states(eta, 0.3, 3, N + 5)
        for fn in OPERATORS.values():
            for i in range(3):
                for j in range(3):
                    assert abs(fn(lo[i], lo[j]) - fn(hi[i], hi[j])) < 1e-8


class TestOscillatorLimit:
    ETAS = (4.0, 16.0, 64.0)

    def ratios(self, op, n, m):
        out = []
        for eta in self.ETAS:
            st = states(eta, 0.0, max(n, m) + 1)
            val = abs(OPERATORS[op](st[n], st[m]))
            out.append(val / ho_reference(op, eta, n, m))
        return out

    def test_z01_monotone(self):
        r = self.ratios("z", 0, 1)
        dev = [abs(x - 1) for x in r]
        assert dev[0] > dev[1] > dev[2]
        assert dev[1] < 0.05

    def test_z2_00_monotone(self):
        r = self.ratios("z2", 0, 0)
        dev = [abs(x - 1) for x in r]
        assert dev[0] > dev[1] > dev[2]
        # anharmonic softening: frozen at eta = 16
        assert r[1] == pytest.approx(1.0716, abs=5e-4)

    def test_higher_elements(self):
        for op, n, m in (("z2", 0, 2), ("z2", 1, 1)):
            dev = [abs(x - 1) for x in self.ratios(op, n, m)]
            assert dev[0] > dev[1] > dev[2]
        # band 2 is near the barrier top at eta = 4, so |z_12| only settles later
        dev = [abs(x - 1) for x in self.ratios("z", 1, 2)]
        assert dev[1] > dev[2]

    def test_cos00_trend(self):
        cos00, gaps = [], []
        for eta in self.ETAS:
            g = states(eta, 0.0, 1)[0]
            c = cos_nm(g, g).real
            cos00.append(c)
            gaps.append(abs(c - (1 - z2_nm(g, g).real / 2)))
        assert cos00[0] < cos00[1] < cos00[2]
        assert gaps[0] > gaps[1] > gaps[2]


class TestErrors:
    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            z_nm(mode(3, 0), mode(4, 0))
        with pytest.raises(ShapeMismatch):
            cos_nm(mode(3, 0, nu=0.1), mode(3, 0, nu=0.2))
        with pytest.raises(ShapeMismatch):
            sin_nm(mode(3, 0, eta=1.0), mode(3, 0, eta=2.0))

    def test_shape_mismatch_is_value_error(self):
        with pytest.raises(ValueError):
            z2_nm(mode(3, 0), mode(4, 0))

    def test_matrix_element(self):
        r = matrix_element("z", MathieuParams.auto(16.0), 0.0, 0, 1)
        assert (r.operator, r.n, r.m, r.nu) == ("z", 0, 1, 0.0)
        assert abs(r.value) == pytest.approx(0.5175, abs=1e-4)
        with pytest.raises(ValueError):
            matrix_element("p", MathieuParams.auto(1.0), 0.0, 0, 0)
        with pytest.raises(ValueError):
            ho_reference("cos", 4.0, 0, 0)
