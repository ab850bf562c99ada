import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from combcavity.cavity import CavitySpec, LockConfig, nominal_length
from combcavity.comb_model import CombSpec, flat_envelope
from combcavity.constants import SPEED_OF_LIGHT
from combcavity.errors import DomainError
from combcavity.filter_analysis import filter_comb
from combcavity.mirror_model import constant_coating
from combcavity.multicavity import (BankEntry, CavityBankPlan, overlap_beats,
                                    plan_bank)

M = 20


@pytest.fixture(scope="module")
def flat_coating():
    return constant_coating(0.99, 0.0, 740e-9, 860e-9)


@pytest.fixture(scope="module")
def wide_comb():
    f_lo, f_hi = SPEED_OF_LIGHT / 860e-9, SPEED_OF_LIGHT / 740e-9
    env_f, env_p = flat_envelope(f_lo - 2e9, f_hi + 2e9)
    return CombSpec(1e9, 0.0, math.ceil(f_lo / 1e9), math.floor(f_hi / 1e9),
                    env_f, env_p)


def _entry(coating, band, lock_center, tooth_offset, weight=1.0):
    return BankEntry(band, coating, M, tooth_offset,
                     LockConfig(lock_center, 2e-9, M), weight=weight)


@pytest.fixture(scope="module")
def two_cavity_result(wide_comb, flat_coating):
    plan = CavityBankPlan((
        _entry(flat_coating, (745e-9, 805e-9), 775e-9, 0),
        _entry(flat_coating, (795e-9, 855e-9), 825e-9, 5),
    ))
    return plan_bank(wide_comb, plan)


class TestBankEntryValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(band=(805e-9, 745e-9)),
        dict(band=(0.0, 805e-9)),
        dict(m_filter=1),
        dict(tooth_offset=-1),
        dict(tooth_offset=M),
        dict(weight=-0.1),
        dict(weight=1.5),
        dict(lock=LockConfig(900e-9, 2e-9, M)),  # center outside band
    ])
    def test_bad_entry(self, flat_coating, kwargs):
        base = dict(band=(745e-9, 805e-9), coating=flat_coating, m_filter=M,
                    tooth_offset=0, lock=LockConfig(775e-9, 2e-9, M))
        base.update(kwargs)
        with pytest.raises(DomainError):
            BankEntry(**base)


class TestBankPlanValidation:
    def test_empty_plan(self):
        with pytest.raises(DomainError):
            CavityBankPlan(())

    def test_mixed_filter_order(self, flat_coating):
        blue = _entry(flat_coating, (745e-9, 805e-9), 775e-9, 0)
        red = BankEntry((795e-9, 855e-9), flat_coating, 10, 0,
                        LockConfig(825e-9, 2e-9, 10))
        with pytest.raises(DomainError, match="share one m_filter"):
            CavityBankPlan((blue, red))

    def test_unordered_bands(self, flat_coating):
        blue = _entry(flat_coating, (745e-9, 805e-9), 775e-9, 0)
        red = _entry(flat_coating, (795e-9, 855e-9), 825e-9, 5)
        with pytest.raises(DomainError, match="ordered"):
            CavityBankPlan((red, blue))

    def test_gap_between_bands(self, flat_coating):
        blue = _entry(flat_coating, (745e-9, 780e-9), 760e-9, 0)
        red = _entry(flat_coating, (800e-9, 855e-9), 825e-9, 5)
        with pytest.raises(DomainError, match="overlap"):
            CavityBankPlan((blue, red))


class TestPlanBank:
    def test_single_entry_matches_direct_filtering(self, wide_comb,
                                                   flat_coating):
        entry = _entry(flat_coating, (745e-9, 805e-9), 775e-9, 3)
        result = plan_bank(wide_comb, CavityBankPlan((entry,)))

        length = nominal_length(wide_comb.f_rep, M, None, flat_coating,
                                775e-9)
        cavity = CavitySpec(length, flat_coating)
        spectrum = filter_comb(wide_comb, cavity, entry.lock, tooth_offset=3)
        keep = spectrum.passed_mask \
            & (spectrum.frequencies >= SPEED_OF_LIGHT / 805e-9) \
            & (spectrum.frequencies <= SPEED_OF_LIGHT / 745e-9)
        assert np.array_equal(result.merged_indices, spectrum.indices[keep])
        assert_allclose(result.merged_amplitudes, spectrum.amplitudes[keep],
                        rtol=0.0, atol=0.0)

    def test_merged_frequencies_ascending_and_in_class(self,
                                                       two_cavity_result):
        freq = two_cavity_result.merged_frequencies
        assert np.all(np.diff(freq) > 0.0)
        classes = np.unique(two_cavity_result.merged_indices % M)
        assert set(classes.tolist()) == {0, 5}

    def test_midpoint_clipping_covers_each_tooth_once(self,
                                                      two_cavity_result):
        idx = two_cavity_result.merged_indices
        assert np.unique(idx).size == idx.size
        # the split lands at the 795-805 nm overlap midpoint
        lam = SPEED_OF_LIGHT / two_cavity_result.merged_frequencies
        blue = idx[lam < 800e-9] % M
        red = idx[lam > 800e-9] % M
        assert set(blue.tolist()) == {0} and set(red.tolist()) == {5}

    def test_weight_scales_merged_amplitudes(self, wide_comb, flat_coating):
        heavy = plan_bank(wide_comb, CavityBankPlan(
            (_entry(flat_coating, (745e-9, 805e-9), 775e-9, 0),)))
        light = plan_bank(wide_comb, CavityBankPlan(
            (_entry(flat_coating, (745e-9, 805e-9), 775e-9, 0, weight=0.25),)))
        assert_allclose(light.merged_amplitudes,
                        0.5 * heavy.merged_amplitudes, rtol=1e-12)

    def test_failure_names_the_band(self, wide_comb):
        narrow = constant_coating(0.99, 0.0, 740e-9, 860e-9)
        entry = BankEntry((1200e-9, 1300e-9), narrow, M, 0,
                          LockConfig(1250e-9, 2e-9, M))
        with pytest.raises(DomainError,
                           match=r"band \[1200\.0, 1300\.0\] nm"):
            plan_bank(wide_comb, CavityBankPlan((entry,)))


class TestOverlapBeats:
    def test_offset_difference_sets_min_beat(self, two_cavity_result):
        beats = overlap_beats(two_cavity_result, (0, 1))
        assert beats == sorted(beats)
        assert beats[0] == 5e9
        assert all(b % 1e9 == 0.0 for b in beats)

    def test_equal_offsets_share_teeth(self, wide_comb, flat_coating):
        plan = CavityBankPlan((
            _entry(flat_coating, (745e-9, 805e-9), 775e-9, 0),
            _entry(flat_coating, (795e-9, 855e-9), 825e-9, 0),
        ))
        beats = overlap_beats(plan_bank(wide_comb, plan), (0, 1))
        assert beats[0] == 0.0
        assert beats[1] == M * 1e9

    def test_complementary_offset_beats_at_f_rep(self, wide_comb,
                                                 flat_coating):
        plan = CavityBankPlan((
            _entry(flat_coating, (745e-9, 805e-9), 775e-9, 0),
            _entry(flat_coating, (795e-9, 855e-9), 825e-9, M - 1),
        ))
        beats = overlap_beats(plan_bank(wide_comb, plan), (0, 1))
        assert beats[0] == 1e9

    def test_disjoint_bands_rejected(self, wide_comb, flat_coating):
        plan = CavityBankPlan((
            _entry(flat_coating, (750e-9, 790e-9), 770e-9, 0),
            _entry(flat_coating, (780e-9, 830e-9), 805e-9, 5),
            _entry(flat_coating, (820e-9, 860e-9), 840e-9, 10),
        ))
        result = plan_bank(wide_comb, plan)
        assert overlap_beats(result, (1, 2))[0] == 5e9
        with pytest.raises(DomainError, match="do not overlap"):
            overlap_beats(result, (0, 2))
