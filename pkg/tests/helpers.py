"""Shared builders for the test suite."""

from __future__ import annotations

import math

import numpy as np

from combcavity.cavity import (CavitySpec, LinearIndexMedium, LockConfig,
                               find_resonance, nominal_length)
from combcavity.comb_model import CombSpec, flat_envelope, shift_offset
from combcavity.constants import SPEED_OF_LIGHT
from combcavity.filter_analysis import (bandwidth_closed_form, filter_comb,
                                        usable_bandwidth)
from combcavity.mirror_model import constant_coating


def flat_filter_setup(reflectivity: float, m: int, delta_nu_cc: float = 0.0,
                      f_rep: float = 1e9, wavelength: float = 800e-9,
                      halfspan_modes: int = 60):
    """Frequency-flat cavity plus a comb tooth parked ``delta_nu_cc``
    below the resonance nearest ``wavelength``.

    L = c/(2 m f_rep) with zero mirror and geometric phase puts the
    cavity resonances exactly at integer multiples of m * f_rep, so the
    tooth-resonance alignment is exact by construction instead of relying
    on a numerical lock. Returns (comb, cavity, f_res).
    """
    coating = constant_coating(reflectivity, 0.0, wavelength - 60e-9,
                               wavelength + 60e-9)
    cavity = CavitySpec(SPEED_OF_LIGHT / (2.0 * m * f_rep), coating,
                        geometric_phase=0.0)
    f_res = round(SPEED_OF_LIGHT / wavelength / (m * f_rep)) * m * f_rep
    n_center = round(f_res / f_rep)
    margin = (halfspan_modes + 2 + math.ceil(abs(delta_nu_cc) / f_rep)) * f_rep
    env_f, env_p = flat_envelope(f_res - margin, f_res + margin)
    comb = CombSpec(f_rep, 0.0, n_center - halfspan_modes,
                    n_center + halfspan_modes, env_f, env_p)
    if delta_nu_cc:
        comb = shift_offset(comb, -delta_nu_cc)
    return comb, cavity, f_res


def dispersion_limited_band(delta_n: float, reflectivity: float = 0.992,
                            m: int = 20, f_rep: float = 1e9,
                            lam0: float = 800e-9):
    """Closed-form and measured usable bandwidth of an intracavity medium
    whose index changes by ``delta_n`` from the band center to the red
    half-bandwidth point. Returns (closed_form, measured) in meters.

    The comb offset is chosen so a tooth lands exactly on the resonance
    nearest the lock center, and the lock is pinned to that tooth class,
    isolating dispersive walk-off from lock detuning.
    """
    closed = bandwidth_closed_form(m, lam0, f_rep, reflectivity, delta_n)
    f0 = SPEED_OF_LIGHT / lam0
    f_edge = SPEED_OF_LIGHT / (lam0 + closed / 2.0)
    medium = LinearIndexMedium(f0, 1.0, delta_n / (f_edge - f0))
    coating = constant_coating(reflectivity, 0.0, 700e-9, 920e-9)
    length = nominal_length(f_rep, m, medium, coating, lam0)
    cavity = CavitySpec(length, coating, medium=medium, geometric_phase=0.0)
    f_res = find_resonance(cavity, f0)
    f_o = f_res % f_rep
    tooth_class = int(round((f_res - f_o) / f_rep)) % m
    f_lo, f_hi = SPEED_OF_LIGHT / 920e-9, SPEED_OF_LIGHT / 700e-9
    env_f, env_p = flat_envelope(f_lo - 2.0 * f_rep, f_hi + 2.0 * f_rep)
    comb = shift_offset(
        CombSpec(f_rep, 0.0, math.ceil(f_lo / f_rep),
                 math.floor(f_hi / f_rep), env_f, env_p), f_o)
    spectrum = filter_comb(comb, cavity, LockConfig(lam0, 2e-9, m),
                           tooth_offset=tooth_class)
    band = usable_bandwidth(spectrum)
    measured = band[1] - band[0] if band is not None else 0.0
    return closed, measured


def equally_spaced_frame(a: float, b: float, c: float, d: float, e: float,
                         n_lines: int, pixels: int) -> np.ndarray:
    """Noiseless detector frame of the constrained calibration model."""
    x = np.arange(pixels, dtype=float)
    centers = b * np.arange(n_lines) + d
    return e + a * np.exp(-c * (x[:, None] - centers[None, :]) ** 2).sum(axis=1)
