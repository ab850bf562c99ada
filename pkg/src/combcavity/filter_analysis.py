"""Derived quantities of the filtered comb.

Everything downstream of the locked cavity lives here: per-mode
transmitted spectra, the usable filter bandwidth (full scan and the
dispersion-limited closed form), side-mode suppression (closed form and
heterodyne-style from the full model), offset scans against the
cavity-comb detuning, cumulative RF beat spectra, and the apparent
center-of-gravity shift of a finite-linewidth comb tooth.

Sign conventions:
  * delta_nu_cc = cavity resonance frequency minus nearest comb-mode
    frequency (positive when the resonance sits above the mode);
  * suppression values are signed dB and negative for suppressed modes;
  * NNL/NNR are the neighbors below/above the passed mode in frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .cavity import (CavitySpec, LockConfig, _fwhm_estimate, cavity_field,
                     find_resonance, lock_cavity, medium_index, relock,
                     round_trip_phase, transmitted_intensity)
from .comb_model import CombSpec, _mode_arrays, gaussian_line
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, NumericError
from .quadrature import adaptive_simpson


@dataclass(frozen=True, eq=False)
class FilteredSpectrum:
    """Per-mode complex transmitted amplitudes with lock metadata.

    indices are contiguous comb indices; amplitudes include the
    sqrt(envelope) input magnitude, so |amplitude|^2 is the transmitted
    intensity of that mode. anchor_index is the dominant passed tooth;
    the passed set is every index congruent to it modulo m_filter.
    """

    indices: np.ndarray
    frequencies: np.ndarray
    amplitudes: np.ndarray
    input_powers: np.ndarray
    f_rep: float
    m_filter: int
    lock_wavelength: float
    locked_length: float
    anchor_index: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        freq = np.asarray(self.frequencies, dtype=float)
        amp = np.asarray(self.amplitudes, dtype=complex)
        pwr = np.asarray(self.input_powers, dtype=float)
        if not (idx.shape == freq.shape == amp.shape == pwr.shape):
            raise DomainError("mode arrays must have identical shapes")
        if idx.size == 0:
            raise DomainError("filtered spectrum has no modes")
        if np.any(np.diff(idx) <= 0):
            raise DomainError("mode indices must be strictly increasing")
        if not np.all(np.isfinite(amp)):
            raise DomainError("amplitudes must be finite")
        trans = np.abs(amp) ** 2
        if np.any(trans > pwr * (1.0 + 1e-9) + 1e-300):
            raise DomainError("transmitted intensity exceeds input intensity")
        if self.m_filter < 2:
            raise DomainError(f"m_filter must be >= 2, got {self.m_filter}")
        for name, val in (("indices", idx), ("frequencies", freq),
                          ("amplitudes", amp), ("input_powers", pwr)):
            object.__setattr__(self, name, val)

    @property
    def passed_mask(self) -> np.ndarray:
        """True for modes on the passed tooth class (anchor mod m_filter)."""
        return (self.indices - self.anchor_index) % self.m_filter == 0

    @property
    def transfer(self) -> np.ndarray:
        """Per-mode intensity transfer |amplitude|^2 / input power (0 where
        the input power is 0)."""
        out = np.zeros_like(self.input_powers)
        np.divide(np.abs(self.amplitudes) ** 2, self.input_powers,
                  out=out, where=self.input_powers > 0.0)
        return out


@dataclass(frozen=True)
class SuppressionRecord:
    """Nearest-neighbor suppression at one lock point (signed dB)."""

    lock_wavelength: float
    nnl_db: float
    nnr_db: float
    passed_transmission: float


@dataclass(frozen=True)
class OffsetScanPoint:
    """One re-locked operating point of a cavity-comb offset scan."""

    delta_nu_cc: float
    locked_length: float
    center_transmission: float
    bandwidth: float | None


def transmit_comb(comb: CombSpec, cavity: CavitySpec, m_filter: int,
                  lock_wavelength: float | None = None,
                  anchor_index: int | None = None) -> FilteredSpectrum:
    """Apply the cavity transfer to every comb mode in the coating domain.

    No locking is performed; the cavity length is taken as-is. Useful
    when the length is set analytically.
    """
    band = cavity.coating.frequency_domain
    idx, freq, power = _mode_arrays(comb, band)
    if idx.size == 0:
        raise DomainError("no comb mode inside the coating domain")
    amps = np.sqrt(power) * cavity_field(cavity, freq)
    intensities = np.abs(amps) ** 2
    if anchor_index is None:
        # brightest mode within one filter period of the lock wavelength;
        # a global argmax could land on a low-reflectivity domain edge
        # where every tooth class transmits
        sel = np.arange(idx.size)
        if lock_wavelength is not None:
            f_lock = SPEED_OF_LIGHT / lock_wavelength
            near = np.abs(freq - f_lock) <= m_filter * comb.f_rep
            if np.any(near):
                sel = np.flatnonzero(near)
        anchor_index = int(idx[sel[int(np.argmax(intensities[sel]))]])
    if lock_wavelength is None:
        pos = int(np.searchsorted(idx, anchor_index))
        lock_wavelength = SPEED_OF_LIGHT / float(freq[min(pos, idx.size - 1)])
    return FilteredSpectrum(idx, freq, amps, power, comb.f_rep, m_filter,
                            lock_wavelength, cavity.length, anchor_index)


def filter_comb(comb: CombSpec, cavity: CavitySpec, lock: LockConfig, *,
                tooth_offset: int | None = None) -> FilteredSpectrum:
    """Lock the cavity, then transmit the full comb through it."""
    length = lock_cavity(comb, cavity, lock, tooth_offset=tooth_offset)
    locked = relock(cavity, length)
    spectrum = transmit_comb(comb, locked, lock.m_filter,
                             lock_wavelength=lock.filter_center)
    if tooth_offset is not None:
        anchor = _nearest_in_class(spectrum, tooth_offset,
                                   SPEED_OF_LIGHT / lock.filter_center)
        spectrum = replace(spectrum, anchor_index=anchor)
    return spectrum


def _nearest_in_class(spectrum: FilteredSpectrum, tooth_offset: int,
                      frequency: float) -> int:
    members = spectrum.indices[spectrum.indices % spectrum.m_filter
                               == tooth_offset % spectrum.m_filter]
    if members.size == 0:
        raise DomainError(
            f"no mode with index = {tooth_offset} (mod {spectrum.m_filter})")
    freqs = members * spectrum.f_rep + (spectrum.frequencies[0]
                                        - spectrum.indices[0] * spectrum.f_rep)
    return int(members[int(np.argmin(np.abs(freqs - frequency)))])


def usable_bandwidth(spectrum: FilteredSpectrum,
                     input_comb: CombSpec | None = None,
                     threshold: float = 0.5):
    """Contiguous wavelength interval of passed teeth with transfer >= threshold.

    The interval must contain the lock wavelength; disjoint pass lobes
    beyond a walk-off revival do not count. Returns (lambda_min,
    lambda_max) in meters, or None when even the lock tooth fails the
    threshold.
    """
    if not 0.0 < threshold <= 1.0:
        raise DomainError(f"threshold must be in (0, 1], got {threshold}")
    mask = spectrum.passed_mask
    freq = spectrum.frequencies[mask]
    if input_comb is not None:
        power = input_comb.envelope_at(freq)
        trans = np.zeros_like(power)
        np.divide(np.abs(spectrum.amplitudes[mask]) ** 2, power,
                  out=trans, where=power > 0.0)
    else:
        trans = spectrum.transfer[mask]
    ok = trans >= threshold
    if not np.any(ok):
        return None
    f_lock = SPEED_OF_LIGHT / spectrum.lock_wavelength
    i = int(np.argmin(np.abs(freq - f_lock)))
    if not ok[i]:
        return None
    lo = i
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    hi = i
    while hi < ok.size - 1 and ok[hi + 1]:
        hi += 1
    return SPEED_OF_LIGHT / float(freq[hi]), SPEED_OF_LIGHT / float(freq[lo])


def bandwidth_closed_form(m: int, wavelength: float, f_rep: float,
                          reflectivity: float, delta_n: float) -> float:
    """Dispersion-limited usable bandwidth m lam^2 f_rep (1-R)/(pi c sqrt(R) dn).

    delta_n is the intracavity index change from the band center to the
    band edge. Vacuum (delta_n -> 0) is unbounded by this term and is a
    domain error here.
    """
    if delta_n <= 0.0:
        raise DomainError(f"delta_n must be positive, got {delta_n}")
    if not 0.0 < reflectivity < 1.0:
        raise DomainError(f"reflectivity must be in (0, 1), got {reflectivity}")
    if m < 2 or wavelength <= 0.0 or f_rep <= 0.0:
        raise DomainError("need m >= 2, wavelength > 0, f_rep > 0")
    phi_max = (1.0 - reflectivity) / math.sqrt(reflectivity)
    return (m * wavelength ** 2 * f_rep * phi_max
            / (math.pi * SPEED_OF_LIGHT * delta_n))


def suppression_closed_form(reflectivity: float, m: int, k: int,
                            delta_nu_cc: float, f_rep: float) -> float:
    """Suppression of the k-th intermediate mode relative to the passed one.

    S = 10 log10[(R^2 - 2R cos(2 pi dcc/(m f_rep)) + 1)
                 / (R^2 - 2R cos(2 pi (dcc/(m f_rep) + k/m)) + 1)]  [dB]

    Signed: negative for suppressed modes; k = 0, dcc = 0 gives 0. The
    neighbor above the passed mode in frequency corresponds to k = -1 and
    the one below to k = +1 when dcc is the resonance-minus-mode offset.
    """
    if not 0.0 < reflectivity < 1.0:
        raise DomainError(f"reflectivity must be in (0, 1), got {reflectivity}")
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if f_rep <= 0.0:
        raise DomainError(f"f_rep must be positive, got {f_rep}")
    R = reflectivity
    x = delta_nu_cc / (m * f_rep)
    num = R * R - 2.0 * R * math.cos(2.0 * math.pi * x) + 1.0
    den = R * R - 2.0 * R * math.cos(2.0 * math.pi * (x + k / m)) + 1.0
    return 10.0 * math.log10(num / den)


def heterodyne_suppression(spectrum: FilteredSpectrum,
                           probe_frequency: float) -> tuple[float, float]:
    """(NNL, NNR) intensity ratios in signed dB around the passed mode
    nearest the probe, envelope weights included.

    NNL is the neighbor one comb spacing below in frequency, NNR one
    above.
    """
    mask = spectrum.passed_mask
    passed_pos = np.flatnonzero(mask)
    if passed_pos.size == 0:
        raise DomainError("spectrum has no passed modes")
    freqs = spectrum.frequencies
    j = passed_pos[int(np.argmin(np.abs(freqs[passed_pos] - probe_frequency)))]
    if abs(freqs[j] - probe_frequency) > 0.5 * spectrum.m_filter * spectrum.f_rep + spectrum.f_rep:
        raise DomainError(
            "probe is more than half a filter period from any passed mode")
    if j == 0 or j == freqs.size - 1:
        raise DomainError("passed mode at the spectrum edge has no neighbors")
    intens = np.abs(spectrum.amplitudes) ** 2
    if intens[j] <= 0.0:
        raise NumericError("passed mode carries no power")
    nnl = 10.0 * math.log10(intens[j - 1] / intens[j])
    nnr = 10.0 * math.log10(intens[j + 1] / intens[j])
    return nnl, nnr


def suppression_scan(comb: CombSpec, cavity: CavitySpec, lock: LockConfig,
                     lock_centers) -> list[SuppressionRecord]:
    """Re-lock at each wavelength in ``lock_centers`` and record the
    nearest-neighbor suppression and passed-mode transmission there."""
    records = []
    for lam in lock_centers:
        cfg = replace(lock, filter_center=float(lam))
        spectrum = filter_comb(comb, cavity, cfg)
        nnl, nnr = heterodyne_suppression(spectrum, SPEED_OF_LIGHT / float(lam))
        mask = spectrum.passed_mask
        freq = spectrum.frequencies[mask]
        i = int(np.argmin(np.abs(freq - SPEED_OF_LIGHT / float(lam))))
        records.append(SuppressionRecord(float(lam), nnl, nnr,
                                         float(spectrum.transfer[mask][i])))
    return records


def offset_scan(comb: CombSpec, cavity: CavitySpec, lock: LockConfig,
                delta_nu_cc_grid) -> list[OffsetScanPoint]:
    """Re-lock the cavity across one period of cavity-comb offsets.

    Offset zero means a comb tooth sits exactly on the cavity resonance
    nearest the lock center at the given (nominal) length, so the scan
    starts at L* = cavity.length with maximal transmission; the comb is
    first shifted to that alignment, then rigidly by each grid offset.
    The servo is pinned to the aligned tooth-label class and each lock
    searches a narrow window around the previous locked length, the way
    a real servo tracks. Within a period the locked length drifts
    linearly with the offset; where the folded offset wraps past f_rep
    the pinned label class lands on new physical teeth and the length
    snaps back: a sawtooth with exactly one jump per period.
    """
    from .comb_model import mode_frequency, nearest_mode_index, shift_offset
    f_lock = SPEED_OF_LIGHT / lock.filter_center
    f_res = find_resonance(cavity, f_lock)
    n_res = nearest_mode_index(comb, f_res)
    base = f_res - mode_frequency(comb, n_res)
    aligned = shift_offset(comb, base)
    pinned = (n_res + (aligned.n_min - comb.n_min)) % lock.m_filter

    n_lock = float(medium_index(cavity.medium, f_lock))
    period = lock.filter_center / (2.0 * n_lock)
    follow = min(0.5 * period,
                 max(0.125 * period, 1.5 * period / lock.m_filter))

    points = []
    current = cavity
    for k, delta in enumerate(delta_nu_cc_grid):
        d = float(delta)
        if not 0.0 <= d <= comb.f_rep:
            raise DomainError(
                f"offset {d} outside one comb period [0, {comb.f_rep}]")
        shifted = shift_offset(comb, base + d)
        cfg = lock if k == 0 else replace(lock, search_halfwidth=follow)
        spectrum = filter_comb(shifted, current, cfg, tooth_offset=pinned)
        current = relock(cavity, spectrum.locked_length)
        mask = spectrum.passed_mask
        freq = spectrum.frequencies[mask]
        i = int(np.argmin(np.abs(freq - f_lock)))
        band = usable_bandwidth(spectrum)
        width = float(band[1] - band[0]) if band is not None else None
        points.append(OffsetScanPoint(d, float(spectrum.locked_length),
                                      float(spectrum.transfer[mask][i]), width))
    return points


def rf_beat_spectrum(spectrum: FilteredSpectrum, max_harmonic: int,
                     band: tuple[float, float] | None = None
                     ) -> list[tuple[int, float]]:
    """Cumulative beat power at each harmonic j of f_rep.

    Beat power at j f_rep is |sum_N E_N conj(E_{N+j})|^2 over the whole
    spectrum (or the modes inside ``band`` [Hz] when given, which keeps
    unfiltered coating-edge teeth out of the detector sum), normalized
    to the j = m_filter beat (the repetition-rate beat of the passed
    teeth). Falls back to raw powers if that beat is exactly zero.
    """
    amps = spectrum.amplitudes
    if band is not None:
        f_lo, f_hi = band
        if not f_lo < f_hi:
            raise DomainError(f"band must be ascending, got {band}")
        amps = amps[(spectrum.frequencies >= f_lo)
                    & (spectrum.frequencies <= f_hi)]
    if amps.size < 2:
        raise DomainError("need >= 2 modes for a beat spectrum")
    if not 1 <= max_harmonic < amps.size:
        raise DomainError(
            f"max_harmonic must be in [1, {amps.size - 1}], got {max_harmonic}")

    def beat(j):
        return float(np.abs(np.sum(amps[:-j] * np.conj(amps[j:]))) ** 2)

    powers = [beat(j) for j in range(1, max_harmonic + 1)]
    m = spectrum.m_filter
    norm = beat(m) if m < amps.size else 0.0
    if norm > 0.0:
        powers = [p / norm for p in powers]
    return list(zip(range(1, max_harmonic + 1), powers))


def cog_shift(linewidth_fwhm: float, cavity: CavitySpec,
              mode_frequency: float, delta_nu_cc: float,
              tol_hz: float = 1.0) -> float:
    """Apparent shift of the center of gravity of one filtered comb tooth.

    The tooth is a unit-peak Gaussian of FWHM ``linewidth_fwhm`` whose
    center sits ``delta_nu_cc`` below the cavity resonance nearest
    ``mode_frequency``; the transmitted line is the Gaussian times
    |E|^2. Returns centroid minus unfiltered center [Hz], accurate to
    ``tol_hz`` (adaptive Simpson; the integration variable is the offset
    from the line center so the 1e14 Hz carrier does not eat precision).
    A zero linewidth returns exactly 0: a delta line passes unshifted.
    """
    if linewidth_fwhm < 0.0:
        raise DomainError(f"linewidth_fwhm must be >= 0, got {linewidth_fwhm}")
    if linewidth_fwhm == 0.0:
        return 0.0
    f_res = find_resonance(cavity, mode_frequency, tol_hz=0.01)
    f_line = f_res - delta_nu_cc
    fwhm_cav = _fwhm_estimate(cavity, f_res)
    n_res = float(medium_index(cavity.medium, f_res))
    fsr = SPEED_OF_LIGHT / (2.0 * n_res * cavity.length)

    # The absolute round-trip phase is ~1e8 rad, so a direct evaluation
    # keeps only ~3e-8 rad of it; resolved against the << 1 rad features
    # of the resonance that is pure noise. Evaluate the phase relative to
    # the resonance instead: with u = f - f_res,
    #   Theta(f) - Theta(f_res) =
    #       (4 pi L / c) (n(f) u + f_res (n(f) - n_res)) + 2 dphi_r(u),
    # which is exact and loses nothing, then add the (tiny) residual of
    # Theta at the resonance itself.
    resid = math.remainder(round_trip_phase(cavity, f_res), 2.0 * math.pi)
    phi_r_res = float(cavity.coating.phase_at(f_res))
    k_geom = 4.0 * math.pi * cavity.length / SPEED_OF_LIGHT

    def local_transmission(u):
        f = f_res + u
        n_f = medium_index(cavity.medium, f)
        phi = (k_geom * (n_f * u + f_res * (n_f - n_res))
               + 2.0 * (cavity.coating.phase_at(f) - phi_r_res) + resid)
        refl = np.clip(cavity.coating.reflectivity_at(f), 0.0, 1.0 - 1e-12)
        s = np.sin(0.5 * phi)
        t = (1.0 - refl) ** 2
        return t / (t + 4.0 * refl * s * s)

    w = 8.0 * max(linewidth_fwhm, fwhm_cav)
    x_res = f_res - f_line
    lo = min(0.0, x_res) - w
    hi = max(0.0, x_res) + w
    scales = np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0])
    seeds = [np.concatenate([-scales, scales]) * linewidth_fwhm]
    q_lo = math.ceil((lo - x_res) / fsr)
    q_hi = math.floor((hi - x_res) / fsr)
    for q in range(q_lo, q_hi + 1):
        seeds.append(x_res + q * fsr
                     + np.concatenate([-scales, scales]) * fwhm_cav)
    pts = np.unique(np.clip(np.concatenate([[lo, hi]] + seeds), lo, hi))

    c_lo, c_hi = cavity.coating.frequency_domain
    if f_line + lo < c_lo or f_line + hi > c_hi:
        raise DomainError("integration window extends beyond the coating domain")

    def integrand(x):
        line = gaussian_line(x, linewidth_fwhm)
        trans = local_transmission(x - x_res)
        weight = line * trans
        return np.column_stack([weight, x * weight])

    coarse = integrand(pts)
    i_est = float(np.trapezoid(coarse[:, 0], pts))
    if i_est <= 0.0:
        i_est = linewidth_fwhm * 1e-12
    # budget the zeroth moment against the expected shift scale (a tooth
    # cannot shift by more than about its own width), not the window
    # half-width; the bound check below catches an underestimate
    shift_scale = max(linewidth_fwhm, 1e3 * tol_hz)
    tol = np.array([0.4 * tol_hz / shift_scale, 0.4 * tol_hz]) * i_est
    for _ in range(4):
        (i0, m1), (e0, e1) = adaptive_simpson(integrand, pts, tol)
        if i0 <= 0.0:
            raise NumericError("transmitted line integrated to zero power")
        shift = m1 / i0
        bound = (e1 + abs(shift) * e0) / i0
        if bound <= tol_hz:
            return float(shift)
        tol = tol * (tol_hz / bound) * 0.3
    raise NumericError(
        f"centroid quadrature stalled at tolerance {bound:.3e} Hz")
