import numpy as np
import pytest
from numpy.testing import assert_allclose

from combcavity.air_index import (DEFAULT_LAB_CONDITIONS, STANDARD_AIR,
                                  AirConditions, ciddor_index, index_change)
from combcavity.constants import TORR_TO_PA
from combcavity.errors import DomainError

# frozen reference evaluations of this implementation
N_STANDARD_633 = 1.0002765302104355
N_LAB_800 = 1.0002207297177677
DN_LAB_750_850 = 5.001471945487168e-07


class TestReferenceValues:
    def test_standard_air_633nm(self):
        assert_allclose(float(ciddor_index(STANDARD_AIR, 633e-9)),
                        N_STANDARD_633, rtol=0.0, atol=2e-13)

    def test_lab_conditions_800nm(self):
        assert_allclose(float(ciddor_index(DEFAULT_LAB_CONDITIONS, 800e-9)),
                        N_LAB_800, rtol=0.0, atol=2e-13)

    def test_index_change_lab_band(self):
        dn = index_change(DEFAULT_LAB_CONDITIONS, (750e-9, 850e-9))
        assert_allclose(dn, DN_LAB_750_850, rtol=1e-9)
        assert 1e-7 < dn < 1e-6

    def test_condition_constants(self):
        assert STANDARD_AIR == AirConditions(15.0, 101325.0, 0.0, 450.0)
        assert DEFAULT_LAB_CONDITIONS.pressure_pa == 630.0 * TORR_TO_PA


class TestLimits:
    def test_zero_pressure_is_exactly_vacuum(self):
        cond = AirConditions(20.0, 0.0, 0.0, 400.0)
        assert ciddor_index(cond, 633e-9) == 1.0
        out = ciddor_index(cond, np.array([0.5e-6, 1.0e-6]))
        assert np.all(out == 1.0)

    def test_index_change_vacuum_and_degenerate_band(self):
        cond = AirConditions(20.0, 0.0)
        assert index_change(cond, (700e-9, 900e-9)) == 0.0
        assert index_change(STANDARD_AIR, (800e-9, 800e-9)) == 0.0

    def test_normal_dispersion_monotone(self):
        lam = np.linspace(0.4e-6, 1.7e-6, 80)
        n = ciddor_index(STANDARD_AIR, lam)
        assert np.all(np.diff(n) < 0.0)

    def test_refractivity_nearly_linear_in_pressure(self):
        def refr(p):
            return float(ciddor_index(AirConditions(20.0, p), 633e-9)) - 1.0
        lo, mid, hi = refr(5e4), refr(8e4), refr(1.1e5)
        assert abs(mid - 0.5 * (lo + hi)) < 1e-3 * mid

    def test_humidity_lowers_index(self):
        dry = AirConditions(20.0, 101325.0, 0.0, 450.0)
        wet = AirConditions(20.0, 101325.0, 1.0, 450.0)
        assert ciddor_index(wet, 633e-9) < ciddor_index(dry, 633e-9)

    def test_co2_raises_index(self):
        lean = AirConditions(15.0, 101325.0, 0.0, 300.0)
        rich = AirConditions(15.0, 101325.0, 0.0, 800.0)
        assert ciddor_index(rich, 633e-9) > ciddor_index(lean, 633e-9)

    def test_over_ice_branch(self):
        cold = AirConditions(-10.0, 101325.0, 0.5, 450.0)
        n = float(ciddor_index(cold, 633e-9))
        assert 1.0002 < n < 1.0004

    def test_vectorized_matches_scalar(self):
        lam = np.array([0.5e-6, 0.633e-6, 1.0e-6, 1.5e-6])
        vec = ciddor_index(STANDARD_AIR, lam)
        scal = [float(ciddor_index(STANDARD_AIR, float(w))) for w in lam]
        assert_allclose(vec, scal, rtol=0.0, atol=0.0)


class TestValidation:
    @pytest.mark.parametrize("lam", [0.2e-6, 2.0e-6])
    def test_wavelength_outside_validity(self, lam):
        with pytest.raises(DomainError):
            ciddor_index(STANDARD_AIR, lam)

    def test_array_with_one_bad_wavelength(self):
        with pytest.raises(DomainError):
            ciddor_index(STANDARD_AIR, np.array([0.6e-6, 1.8e-6]))

    @pytest.mark.parametrize("kwargs", [
        dict(temperature_c=-41.0),
        dict(temperature_c=101.0),
        dict(pressure_pa=-1.0),
        dict(relative_humidity=-0.1),
        dict(relative_humidity=1.1),
        dict(co2_ppm=-1.0),
    ])
    def test_bad_conditions(self, kwargs):
        base = dict(temperature_c=20.0, pressure_pa=101325.0,
                    relative_humidity=0.0, co2_ppm=450.0)
        base.update(kwargs)
        with pytest.raises(DomainError):
            AirConditions(**base)

    def test_band_order(self):
        with pytest.raises(DomainError):
            index_change(STANDARD_AIR, (900e-9, 700e-9))
