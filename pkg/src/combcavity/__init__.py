"""Fabry-Perot filtering of femtosecond frequency combs.

Simulates a comb transmitted through a passive filter cavity over hundreds
of nanometers of bandwidth, quantifies side-mode suppression and
center-of-gravity line shifts, and evaluates the filtered comb as a
spectrograph wavelength calibrator.
"""

from .air_index import (DEFAULT_LAB_CONDITIONS, STANDARD_AIR, AirConditions,
                        ciddor_index, index_change)
from .calibration import (CalibrationFitResult, PerLineFitResult,
                          SpectrographModel, fit_constrained, fit_per_line,
                          render_ccd, rv_equivalent)
from .cavity import (VACUUM, CavitySpec, LinearIndexMedium, LockConfig,
                     cavity_field, find_resonance, finesse, gouy_phase,
                     local_fsr, lock_cavity, medium_index, nominal_length,
                     relock, resonance_fwhm, round_trip_phase,
                     transmitted_intensity)
from .comb_model import (CombSpec, ModeField, flat_envelope, gaussian_line,
                         load_envelope, mode_frequency, nearest_mode_index,
                         sample_comb, shift_offset)
from .config import RunConfig
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, FitError, NumericError
from .filter_analysis import (FilteredSpectrum, OffsetScanPoint,
                              SuppressionRecord, bandwidth_closed_form,
                              cog_shift, filter_comb, heterodyne_suppression,
                              offset_scan, rf_beat_spectrum,
                              suppression_closed_form, suppression_scan,
                              transmit_comb, usable_bandwidth)
from .mirror_model import (CoatingModel, StackDesign, constant_coating,
                           detrend_phase, load_coating, phase_tolerance,
                           quarter_wave_stack, reference_bragg_coating,
                           reference_bragg_design, stack_reflection,
                           write_coating_csv)
from .multicavity import (BankEntry, BankResult, CavityBankPlan,
                          CavityResult, overlap_beats, plan_bank)
from .quadrature import adaptive_simpson

__version__ = "0.1.0"

__all__ = [
    "AirConditions", "BankEntry", "BankResult", "CalibrationFitResult",
    "CavityBankPlan", "CavityResult", "CavitySpec", "CoatingModel",
    "CombSpec", "DEFAULT_LAB_CONDITIONS", "DomainError", "FilteredSpectrum",
    "FitError", "LinearIndexMedium", "LockConfig", "ModeField",
    "NumericError", "OffsetScanPoint", "PerLineFitResult", "RunConfig",
    "SPEED_OF_LIGHT", "STANDARD_AIR", "SpectrographModel",
    "SuppressionRecord", "VACUUM", "adaptive_simpson",
    "bandwidth_closed_form", "cavity_field", "ciddor_index", "cog_shift",
    "constant_coating", "detrend_phase", "filter_comb", "find_resonance",
    "finesse", "fit_constrained", "fit_per_line", "flat_envelope",
    "gaussian_line", "gouy_phase", "heterodyne_suppression", "index_change",
    "load_coating", "load_envelope", "local_fsr", "lock_cavity",
    "medium_index", "mode_frequency", "nearest_mode_index",
    "nominal_length", "offset_scan", "overlap_beats", "phase_tolerance",
    "plan_bank", "quarter_wave_stack", "reference_bragg_coating",
    "reference_bragg_design", "relock", "render_ccd", "resonance_fwhm",
    "rf_beat_spectrum", "round_trip_phase", "rv_equivalent", "sample_comb",
    "shift_offset", "stack_reflection", "suppression_closed_form",
    "suppression_scan", "transmit_comb", "transmitted_intensity",
    "usable_bandwidth", "write_coating_csv",
]
