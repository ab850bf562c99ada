import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from combcavity.constants import SPEED_OF_LIGHT
from combcavity.errors import DomainError
from combcavity.mirror_model import (CoatingModel, StackDesign,
                                     constant_coating, detrend_phase,
                                     load_coating, phase_tolerance,
                                     quarter_wave_stack,
                                     reference_bragg_coating,
                                     reference_bragg_design, stack_reflection,
                                     write_coating_csv)


def _fresnel_recursive(design: StackDesign, lam: float) -> complex:
    """Independent reflection-amplitude oracle: interface-by-interface
    Fresnel recursion from the substrate upward."""
    ns = [design.incident_index] + [n for n, _ in design.layers] \
        + [design.substrate_index]
    ds = [d for _, d in design.layers]
    r = (ns[-2] - ns[-1]) / (ns[-2] + ns[-1])
    for j in range(len(ds) - 1, -1, -1):
        delta = 2.0 * math.pi * ns[j + 1] * ds[j] / lam
        rp = (ns[j] - ns[j + 1]) / (ns[j] + ns[j + 1])
        e = cmath.exp(-2j * delta)
        r = (rp + r * e) / (1.0 + rp * r * e)
    return r


class TestStackReflection:
    def test_bare_interface_fresnel(self):
        bare = StackDesign(1.5, 1.0, ())
        R, phase = stack_reflection(bare, 633e-9)
        assert_allclose(R, ((1.0 - 1.5) / (1.0 + 1.5)) ** 2, rtol=1e-15)
        assert_allclose(abs(phase), math.pi, rtol=1e-15)
        # incident denser than substrate: reflection without phase flip
        inverted = StackDesign(1.0, 1.5, ())
        _, phase_inv = stack_reflection(inverted, 633e-9)
        assert_allclose(phase_inv, 0.0, atol=1e-15)

    def test_single_quarter_wave_layer(self):
        lam0 = 910e-9
        n_layer, n_sub = 2.0, 1.5
        design = StackDesign(n_sub, 1.0, ((n_layer, lam0 / (4.0 * n_layer)),))
        R, _ = stack_reflection(design, lam0)
        y = n_layer ** 2 / n_sub
        assert_allclose(R, ((1.0 - y) / (1.0 + y)) ** 2, rtol=1e-12)

    def test_quarter_wave_stack_admittance_formula(self):
        n_h, n_l, n_s, pairs = 2.1, 1.45, 1.5, 5
        design = quarter_wave_stack(910e-9, n_h, n_l, pairs)
        R, phase = stack_reflection(design, 910e-9)
        y = n_s * (n_h / n_l) ** (2 * pairs)
        assert_allclose(R, ((1.0 - y) / (1.0 + y)) ** 2, rtol=1e-12)
        assert_allclose(abs(phase), math.pi, rtol=1e-12)

    def test_matches_fresnel_recursion(self):
        design = reference_bragg_design()
        for lam in np.linspace(700e-9, 1150e-9, 41):
            R, phase = stack_reflection(design, float(lam))
            r = cmath.rect(math.sqrt(R), phase)
            assert abs(r - _fresnel_recursive(design, float(lam))) < 1e-10

    def test_vectorized_matches_scalar(self):
        design = reference_bragg_design()
        lam = np.linspace(750e-9, 1100e-9, 7)
        R_vec, ph_vec = stack_reflection(design, lam)
        for i, w in enumerate(lam):
            R_i, ph_i = stack_reflection(design, float(w))
            assert R_vec[i] == R_i and ph_vec[i] == ph_i

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.floats(1.0, 3.0), st.floats(10e-9, 500e-9)),
                    min_size=0, max_size=6),
           st.floats(300e-9, 2e-6))
    def test_lossless_unitarity(self, layers, lam):
        design = StackDesign(1.5, 1.0, tuple(layers))
        R, _ = stack_reflection(design, lam)
        assert R <= 1.0 + 1e-12

    def test_bad_wavelength(self):
        with pytest.raises(DomainError):
            stack_reflection(StackDesign(1.5, 1.0, ()), 0.0)


class TestStackDesignValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(substrate_index=0.9),
        dict(incident_index=0.5),
        dict(layers=((0.8, 100e-9),)),
        dict(layers=((1.5, 0.0),)),
        dict(layers=((1.5, -1e-9),)),
    ])
    def test_bad_design(self, kwargs):
        base = dict(substrate_index=1.5, incident_index=1.0,
                    layers=((2.0, 100e-9),))
        base.update(kwargs)
        with pytest.raises(DomainError):
            StackDesign(**base)

    def test_quarter_wave_structure(self):
        design = quarter_wave_stack(910e-9, 2.2, 1.45, 3,
                                    substrate_index=1.52)
        assert design.substrate_index == 1.52
        assert len(design.layers) == 6
        assert design.layers[0] == (2.2, 910e-9 / (4.0 * 2.2))
        assert design.layers[1] == (1.45, 910e-9 / (4.0 * 1.45))

    @pytest.mark.parametrize("kwargs", [dict(center_wavelength=0.0),
                                        dict(pairs=0)])
    def test_quarter_wave_validation(self, kwargs):
        base = dict(center_wavelength=910e-9, n_high=2.2, n_low=1.45, pairs=3)
        base.update(kwargs)
        with pytest.raises(DomainError):
            quarter_wave_stack(**base)


class TestReferenceBragg:
    def test_peak_reflectivity_is_0992(self):
        R, phase = stack_reflection(reference_bragg_design(), 910e-9)
        assert_allclose(R, 0.992, rtol=0.0, atol=1e-12)
        assert_allclose(abs(phase), math.pi, rtol=1e-12)

    def test_sampled_coating(self):
        coating = reference_bragg_coating()
        lo, hi = coating.wavelength_domain
        assert_allclose([lo, hi], [700e-9, 1150e-9], rtol=1e-12)
        # 910 nm falls on a sample point, so interpolation is exact there
        assert_allclose(coating.reflectivity_at(SPEED_OF_LIGHT / 910e-9),
                        0.992, rtol=0.0, atol=1e-12)

    def test_repo_default_csv_matches_design(self):
        coating = load_coating("data/coating_bragg910.csv")
        fresh = reference_bragg_coating()
        assert_allclose(coating.frequency, fresh.frequency, rtol=1e-12)
        assert_allclose(coating.reflectivity, fresh.reflectivity,
                        rtol=0.0, atol=1e-12)
        assert_allclose(coating.phase_rad, fresh.phase_rad,
                        rtol=0.0, atol=1e-12)


class TestCoatingModel:
    def test_constant_coating_is_exact(self):
        coating = constant_coating(0.99, 0.25, 700e-9, 900e-9)
        f = np.linspace(*coating.frequency_domain, 37)
        assert_allclose(coating.reflectivity_at(f), 0.99, rtol=0.0, atol=1e-12)
        assert_allclose(coating.phase_at(f), 0.25, rtol=0.0, atol=1e-12)

    def test_constant_coating_validation(self):
        with pytest.raises(DomainError):
            constant_coating(1.0, 0.0, 700e-9, 900e-9)
        with pytest.raises(DomainError):
            constant_coating(-0.1, 0.0, 700e-9, 900e-9)

    def test_domain_check(self):
        coating = constant_coating(0.9, 0.0, 700e-9, 900e-9)
        lo, hi = coating.frequency_domain
        with pytest.raises(DomainError):
            coating.reflectivity_at(lo - 1.0)
        with pytest.raises(DomainError):
            coating.phase_at(hi + 1.0)

    def test_interpolated_reflectivity_clamped(self):
        # cubic overshoot around a step must never leave [0, 1)
        lam = np.linspace(800e-9, 900e-9, 21)
        r = np.where(lam < 850e-9, 0.01, 0.98)
        coating = CoatingModel.from_wavelength_samples(
            lam, r, np.zeros_like(lam))
        f = np.linspace(*coating.frequency_domain, 2001)
        out = coating.reflectivity_at(f)
        assert np.all(out >= 0.0) and np.all(out < 1.0)

    def test_from_wavelength_samples_orders_by_frequency(self):
        lam = np.array([700e-9, 800e-9, 900e-9, 1000e-9])
        r = np.array([0.1, 0.2, 0.3, 0.4])
        coating = CoatingModel.from_wavelength_samples(
            lam, r, np.zeros_like(lam))
        assert np.all(np.diff(coating.frequency) > 0.0)
        assert_allclose(coating.reflectivity, r[::-1])

    def test_phase_unwrapped_over_frequency(self):
        lam = np.array([700e-9, 800e-9, 900e-9, 1000e-9])
        # wrapped input phases that are continuous only modulo 2 pi
        phase = np.array([0.1, 3.0, -3.0, 0.1])
        coating = CoatingModel.from_wavelength_samples(
            lam, np.full(4, 0.5), phase)
        assert np.all(np.abs(np.diff(coating.phase_rad)) < math.pi)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_too_few_samples(self, n):
        f = np.linspace(3e14, 4e14, n)
        with pytest.raises(DomainError):
            CoatingModel(f, np.full(n, 0.5), np.zeros(n))

    def test_validation_errors(self):
        f = np.linspace(3e14, 4e14, 8)
        good_r = np.full(8, 0.5)
        good_p = np.zeros(8)
        with pytest.raises(DomainError):
            CoatingModel(f[::-1].copy(), good_r, good_p)
        with pytest.raises(DomainError):
            CoatingModel(f, np.full(8, 1.0), good_p)
        with pytest.raises(DomainError):
            CoatingModel(f, good_r, np.full(8, np.inf))
        with pytest.raises(DomainError):
            CoatingModel(f, good_r[:7], good_p)


class TestCsvRoundTrip:
    def test_write_then_load_is_identity(self, tmp_path):
        coating = reference_bragg_coating(n_samples=64)
        path = tmp_path / "coating.csv"
        write_coating_csv(coating, path, comment="test artifact")
        again = load_coating(path)
        # frequency passes through the wavelength-in-nm representation,
        # so it round-trips only to a couple of ulps
        assert_allclose(again.frequency, coating.frequency, rtol=1e-15)
        assert_allclose(again.reflectivity, coating.reflectivity,
                        rtol=0.0, atol=0.0)
        assert_allclose(again.phase_rad, coating.phase_rad, rtol=0.0, atol=0.0)

    @pytest.mark.parametrize("text", [
        "nm,R,phi\n700,0.5,0\n800,0.5,0\n900,0.5,0\n1000,0.5,0\n",
        "wavelength_nm,reflectivity,phase_rad\n700,0.5,0\n800,0.5,0\n",
        "wavelength_nm,reflectivity,phase_rad\n"
        "700,0.5,0\n800,1.5,0\n900,0.5,0\n1000,0.5,0\n",
        "wavelength_nm,reflectivity,phase_rad\n"
        "700,0.5,0\n900,0.5,0\n800,0.5,0\n1000,0.5,0\n",
        "wavelength_nm,reflectivity,phase_rad\n"
        "700,0.5,0\n800,bad,0\n900,0.5,0\n1000,0.5,0\n",
    ])
    def test_bad_files(self, tmp_path, text):
        path = tmp_path / "coating.csv"
        path.write_text(text)
        with pytest.raises(DomainError):
            load_coating(path)


class TestDetrendPhase:
    def _coating(self, phase):
        f = np.linspace(3e14, 4e14, 41)
        return CoatingModel(f, np.full(41, 0.5), phase), f

    @staticmethod
    def _slope(model):
        f, p = model.frequency, model.phase_rad
        fc = f - f.mean()
        return float(np.dot(fc, p - p.mean()) / np.dot(fc, fc))

    def test_linear_phase_flattens(self):
        f = np.linspace(3e14, 4e14, 41)
        coating, _ = self._coating(2.0 + 3e-14 * (f - f[0]))
        out = detrend_phase(coating)
        assert np.ptp(out.phase_rad) < 1e-9 * np.ptp(coating.phase_rad)

    def test_constant_phase_unchanged(self):
        coating, _ = self._coating(np.full(41, 0.7))
        out = detrend_phase(coating)
        assert_allclose(out.phase_rad, coating.phase_rad, rtol=0.0, atol=1e-15)

    def test_idempotent(self):
        f = np.linspace(3e14, 4e14, 41)
        coating, _ = self._coating(np.sin(2e-13 * (f - f[0])) + 4e-14 * f)
        once = detrend_phase(coating)
        twice = detrend_phase(once)
        assert_allclose(twice.phase_rad, once.phase_rad, rtol=0.0, atol=1e-12)

    def test_removes_only_the_slope(self):
        f = np.linspace(3e14, 4e14, 41)
        wiggle = 0.2 * np.sin(2.0 * math.pi * (f - f[0]) / (f[-1] - f[0]) * 8.0)
        coating = CoatingModel(f, np.full(41, 0.5), wiggle + 5e-14 * f + 1.0)
        out = detrend_phase(coating)
        assert abs(self._slope(out)) < 1e-6 * 5e-14
        # constant offset and curvature survive; only the ramp is gone
        assert np.ptp(out.phase_rad) < np.ptp(coating.phase_rad)
        assert np.ptp(out.phase_rad) > 0.9 * np.ptp(wiggle)


class TestPhaseTolerance:
    def test_reference_values(self):
        assert_allclose(phase_tolerance(0.992), 0.008032193289024995,
                        rtol=1e-14)
        assert_allclose(phase_tolerance(0.99), 0.01005037815259213,
                        rtol=1e-14)

    def test_vanishes_for_perfect_mirrors(self):
        assert phase_tolerance(1.0 - 1e-9) < 1.1e-9

    @pytest.mark.parametrize("r", [0.0, 1.0, -0.1, 1.5])
    def test_validation(self, r):
        with pytest.raises(DomainError):
            phase_tolerance(r)
