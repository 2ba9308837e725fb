import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathieu_bands import core
from mathieu_bands.core import (
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
from mathieu_bands.errors import BandSearchExhausted, TruncationCapExceeded

NU21 = np.linspace(0.0, 1.0, 21)


def closed_form_eta0(nu, N, count):
    k = np.arange(-N, N + 1)
    return np.sort((2 * k - nu) ** 2)[:count]


@pytest.fixture(scope="module")
def params():
    return {eta: MathieuParams.auto(eta) for eta in (0.0, 0.1, 0.3, 1.0, 5.0, 10.0)}


class TestParams:
    def test_validation(self):
        for bad in [(-0.1, 5), (math.nan, 5), (1.0, 0), (1.0, 2.5)]:
            with pytest.raises(ValueError):
                MathieuParams(*bad)
        with pytest.raises(ValueError):
            MathieuParams(1.0, 5, tol=0.0)

    def test_size_and_kappas(self):
        p = MathieuParams(0.5, 3)
        assert p.size == 7
        assert list(p.kappas()) == [-3, -2, -1, 0, 1, 2, 3]


class TestMatrix:
    def test_eta0_diagonal(self):
        T = build_floquet_matrix(MathieuParams(0.0, 2), 0.0)
        assert list(T.diag) == [16, 4, 0, 4, 16]
        assert not T.off.any()

    def test_direct_formula(self):
        T = build_floquet_matrix(MathieuParams(0.3, 1), 0.5)
        assert list(T.diag) == [6.25, 0.25, 2.25]
        assert list(T.off) == [0.3, 0.3]

    def test_rejects_nonfinite_nu(self):
        with pytest.raises(ValueError):
            build_floquet_matrix(MathieuParams(0.3, 1), math.inf)


class TestFolding:
    @pytest.mark.parametrize("nu,expected", [(0.3, 0.3), (-0.3, 0.3), (1.7, 0.3),
                                             (2.3, 0.3), (-1.7, 0.3), (1.0, 1.0), (4.0, 0.0)])
    def test_fold(self, nu, expected):
        assert fold_nu(nu) == pytest.approx(expected, abs=1e-15)

    def test_symmetries(self, params):
        for eta in (0.0, 0.3, 1.0, 5.0):
            p = params[eta]
            for nu in NU21:
                a = characteristic_values(p, nu, 3)
                assert np.max(np.abs(a - characteristic_values(p, -nu, 3))) < p.tol
                assert np.max(np.abs(a - characteristic_values(p, 2 - nu, 3))) < p.tol

    def test_floquet_point_folds(self, params):
        pt = floquet_point(params[1.0], -1.6, 0)
        assert pt.nu == pytest.approx(0.4) and pt.band == 0
        assert pt.a == pytest.approx(characteristic_value(params[1.0], 0.4, 0), abs=1e-14)


class TestCharacteristicValues:
    def test_eta0_closed_form(self, params):
        p = params[0.0]
        for nu in NU21:
            ref = closed_form_eta0(nu, p.truncation, 4)
            assert np.max(np.abs(characteristic_values(p, nu, 4) - ref)) < 1e-12

    def test_ordered_in_band_index(self, params):
        for p in params.values():
            for nu in (0.0, 0.37, 1.0):
                assert np.all(np.diff(characteristic_values(p, nu, 6)) >= 0)

    def test_ground_band_monotone(self, params):
        for p in params.values():
            a = [characteristic_value(p, nu, 0) for nu in NU21]
            assert np.all(np.diff(a) >= -p.tol)

    def test_level_repulsion_lowers_band_bottom(self, params):
        # frozen from this implementation; close to the small-eta series -0.04456597
        assert characteristic_value(params[0.3], 0.0, 0) == pytest.approx(-0.04456597502084402, abs=1e-12)

    def test_eta1_values(self, params):
        p = params[1.0]
        e0 = band_edges(p, 0)
        assert e0.a_lo == pytest.approx(-0.4551386041074136, abs=1e-11)
        assert e0.b_hi == pytest.approx(-0.11024881699209509, abs=1e-11)
        assert band_edges(p, 1).a_lo == pytest.approx(1.8591080725143634, abs=1e-11)

    def test_band_index_checked(self, params):
        with pytest.raises(ValueError):
            characteristic_value(params[0.3], 0.2, -1)
        with pytest.raises(ValueError):
            characteristic_value(MathieuParams(0.3, 1), 0.2, 3)


class TestStates:
    def test_normalisation_residual_sign(self, params):
        for p in params.values():
            for nu in (0.0, 0.3, 1.0):
                for m in range(3):
                    s = floquet_state(p, nu, m)
                    assert abs(np.sum(s.coeffs**2) - 1) < 1e-12
                    T = build_floquet_matrix(p, s.nu)
                    a = characteristic_value(p, nu, m)
                    assert np.linalg.norm(T.matvec(s.coeffs) - a * s.coeffs) < 1e-9
                    mags = np.abs(s.coeffs)
                    first_max = np.argmax(mags >= mags.max() * (1 - 1e-8))
                    assert s.coeffs[first_max] > 0

    def test_eta0_single_mode(self):
        # at eta = 0, nu = 0.3 band 1 is the kappa = +1 mode: a = (2 - 0.3)^2
        s = floquet_state(MathieuParams(0.0, 4), 0.3, 1)
        assert s.coefficient(1) == pytest.approx(1.0, abs=1e-14)
        assert characteristic_value(MathieuParams(0.0, 4), 0.3, 1) == pytest.approx(2.89, abs=1e-13)

    def test_state_records_eta(self, params):
        s = floquet_state(params[0.3], 0.2, 0)
        assert s.eta == 0.3 and s.truncation == params[0.3].truncation


class TestBands:
    def test_eta0_edges(self, params):
        p = params[0.0]
        got = [x for m in range(3) for x in (band_edges(p, m).a_lo, band_edges(p, m).b_hi)]
        assert np.allclose(got, [0, 1, 1, 4, 4, 9], atol=1e-12)

    def test_ordering(self, params):
        for eta in (0.1, 1.0, 10.0):
            p = params[eta]
            edges = [band_edges(p, m) for m in range(4)]
            for m in range(3):
                assert edges[m].a_lo <= edges[m].b_hi
                assert edges[m].b_hi <= edges[m + 1].a_lo + p.tol
            assert edges[0].a_lo < edges[0].b_hi

    def test_width_and_gap(self, params):
        p = params[10.0]
        assert bandwidth(p, 0) == pytest.approx(band_edges(p, 0).width)
        assert bandgap(p, 0) == pytest.approx(11.537410079213824, rel=1e-10)

    def test_is_stable(self, params):
        p = params[0.1]
        e0, e1 = band_edges(p, 0), band_edges(p, 1)
        assert is_stable(0.5 * (e0.a_lo + e0.b_hi), p) == (True, 0)
        assert is_stable(0.5 * (e0.b_hi + e1.a_lo), p) == (False, None)
        assert is_stable(e0.a_lo - 1.0, p) == (False, None)
        assert is_stable(e1.a_lo + 1e-3, p) == (True, 1)
        with pytest.raises(BandSearchExhausted):
            is_stable(1e4, p, max_band=3)


class TestVoltage:
    @pytest.mark.parametrize("eta", [0.0, 0.1, 0.5, 2.0, 5.0])
    def test_hellmann_feynman_vs_fd(self, eta):
        p = MathieuParams.auto(eta)
        for nu in np.linspace(0.05, 0.95, 10):
            for m in (0, 1):
                hf = effective_voltage_numeric(p, nu, m)
                fd = effective_voltage_fd(p, nu, m)
                assert abs(hf - fd) < 1e-7

    def test_eta0_is_2nu(self):
        p = MathieuParams(0.0, 8)
        for nu in NU21:
            assert effective_voltage_numeric(p, nu) == pytest.approx(2 * nu, abs=1e-12)

    def test_odd_in_nu(self):
        p = MathieuParams.auto(0.5)
        assert effective_voltage_numeric(p, -0.3) == pytest.approx(-effective_voltage_numeric(p, 0.3))
        assert effective_voltage_numeric(p, 1.7) == pytest.approx(-effective_voltage_numeric(p, 0.3))

    def test_degenerate_one_sided_limits(self):
        p = MathieuParams(0.0, 6)
        assert effective_voltage_numeric(p, 1.0, 0) == pytest.approx(2.0, abs=1e-12)
        assert effective_voltage_numeric(p, 1.0, 1) == pytest.approx(-2.0, abs=1e-12)
        assert effective_voltage_numeric(p, 0.0, 1) == pytest.approx(-4.0, abs=1e-12)
        assert effective_voltage_numeric(p, 0.0, 2) == pytest.approx(4.0, abs=1e-12)


class TestTruncation:
    def test_floor_at_eta0(self):
        assert truncation_for(0.0) == 10

    def test_converged(self):
        for eta in (1.0, 25.0):
            n = truncation_for(eta)
            for nu in (0.0, 1.0):
                a = characteristic_value(MathieuParams(eta, n), nu, 0)
                b = characteristic_value(MathieuParams(eta, n + 5), nu, 0)
                assert abs(a - b) < 1e-10

    def test_monotone_in_eta(self):
        ns = [truncation_for(eta) for eta in (0.0, 1.0, 10.0, 100.0, 400.0)]
        assert ns == sorted(ns) and ns[-1] > ns[0]

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("MATHIEU_MAX_N", "12")
        with pytest.raises(TruncationCapExceeded):
            truncation_for(100.0)
        monkeypatch.setenv("MATHIEU_MAX_N", "zero")
        with pytest.raises(ValueError):
            core.max_truncation()

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            truncation_for(-1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 20.0), st.floats(-3.0, 3.0))
def test_symmetry_property(eta, nu):
    p = MathieuParams(eta, 20)
    a = characteristic_values(p, nu, 3)
    assert np.allclose(a, characteristic_values(p, -nu, 3), atol=1e-10)
    assert np.allclose(a, characteristic_values(p, 2 - nu, 3), atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 30.0))
def test_band_bottom_at_zero_top_at_one(eta):
    p = MathieuParams(eta, 20)
    e = band_edges(p, 0)
    for nu in np.linspace(0, 1, 9):
        a = characteristic_value(p, nu, 0)
        assert e.a_lo - 1e-10 <= a <= e.b_hi + 1e-10
