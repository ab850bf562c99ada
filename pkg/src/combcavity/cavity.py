"""Fabry-Perot filter cavity: transfer function, resonances, lock servo.

The cavity is two identical mirrors (one CoatingModel used twice) spaced
by L in a medium of index n(f). The complex field transfer at frequency
f is

    E(f) = (1 - R) / (1 - R exp(i Theta)),
    Theta(f) = 4 pi n f L / c + 2 phi_r(f) + phi_D,

normalized to E = 1 exactly on resonance (Theta = 0 mod 2 pi). phi_D is
a frequency-flat geometric phase, by default the Gouy phase of the
symmetric stable cavity.

The physical dither lock is modeled as a deterministic length
optimization: maximize band-integrated envelope-weighted transmission by
a grid scan over one resonance period followed by golden-section
refinement (reproducible to 1e-15 m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .air_index import AirConditions, ciddor_index
from .comb_model import CombSpec, _mode_arrays, nearest_mode_index
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, NumericError

VACUUM = None

_TWO_PI = 2.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LinearIndexMedium:
    """Intracavity medium with index linear in frequency.

    n(f) = index_at_anchor + slope_per_hz * (f - anchor_frequency).
    Useful for isolating the dispersion-limited bandwidth with an exactly
    known index change.
    """

    anchor_frequency: float
    index_at_anchor: float
    slope_per_hz: float

    def __post_init__(self):
        if self.anchor_frequency <= 0.0:
            raise DomainError("anchor_frequency must be positive")
        if self.index_at_anchor <= 0.0:
            raise DomainError("index_at_anchor must be positive")

    def refractive_index(self, frequency):
        f = np.asarray(frequency, dtype=float)
        n = self.index_at_anchor + self.slope_per_hz * (f - self.anchor_frequency)
        return n if n.ndim else float(n)


def medium_index(medium, frequency):
    """Refractive index of an intracavity medium, vectorized over frequency.

    Accepts None (vacuum), AirConditions, or any object exposing
    refractive_index(frequency).
    """
    f = np.asarray(frequency, dtype=float)
    if medium is None:
        out = np.ones_like(f)
        return out if out.ndim else 1.0
    if isinstance(medium, AirConditions):
        return ciddor_index(medium, SPEED_OF_LIGHT / f)
    if hasattr(medium, "refractive_index"):
        return medium.refractive_index(frequency)
    raise DomainError(f"unsupported medium {medium!r}")


def gouy_phase(length: float, mirror_radius: float) -> float:
    """Round-trip geometric phase 2 arccos(1 - L/r) of a symmetric cavity."""
    if mirror_radius <= 0.0:
        raise DomainError(f"mirror_radius must be positive, got {mirror_radius}")
    if not 0.0 <= length <= 2.0 * mirror_radius:
        raise DomainError(
            f"length {length} outside stability range [0, {2.0 * mirror_radius}]")
    return 2.0 * math.acos(1.0 - length / mirror_radius)


def finesse(reflectivity: float) -> float:
    """pi sqrt(R)/(1 - R), the FSR-to-FWHM ratio of a lossless cavity."""
    if not 0.0 < reflectivity < 1.0:
        raise DomainError(f"reflectivity must be in (0, 1), got {reflectivity}")
    return math.pi * math.sqrt(reflectivity) / (1.0 - reflectivity)


@dataclass(frozen=True)
class CavitySpec:
    """Length, mirror coating (used for both mirrors), geometry, and medium.

    geometric_phase defaults to the Gouy phase of (length, mirror_radius).
    """

    length: float
    coating: object
    mirror_radius: float = 0.5
    medium: object = VACUUM
    geometric_phase: float | None = None

    def __post_init__(self):
        if self.length <= 0.0:
            raise DomainError(f"length must be positive, got {self.length}")
        if not self.length < 2.0 * self.mirror_radius:
            raise DomainError(
                f"unstable cavity: length {self.length} not below "
                f"2 * mirror_radius = {2.0 * self.mirror_radius}")
        if self.medium is not None and not isinstance(self.medium, AirConditions) \
                and not hasattr(self.medium, "refractive_index"):
            raise DomainError(f"unsupported medium {self.medium!r}")
        if self.geometric_phase is None:
            object.__setattr__(self, "geometric_phase",
                               gouy_phase(self.length, self.mirror_radius))
        if not math.isfinite(self.geometric_phase):
            raise DomainError("geometric_phase must be finite")


@dataclass(frozen=True)
class LockConfig:
    """Lock bandpass (center/width in wavelength) and filter number m."""

    filter_center: float
    filter_width: float
    m_filter: int
    search_halfwidth: float | None = None

    def __post_init__(self):
        if self.filter_center <= 0.0 or self.filter_width <= 0.0:
            raise DomainError("filter_center and filter_width must be positive")
        if self.filter_width >= 2.0 * self.filter_center:
            raise DomainError("filter band extends to non-positive wavelength")
        if self.m_filter < 2:
            raise DomainError(f"m_filter must be >= 2, got {self.m_filter}")

    @property
    def band_frequency(self) -> tuple[float, float]:
        """Bandpass as an ascending frequency interval [Hz]."""
        lam_lo = self.filter_center - 0.5 * self.filter_width
        lam_hi = self.filter_center + 0.5 * self.filter_width
        return SPEED_OF_LIGHT / lam_hi, SPEED_OF_LIGHT / lam_lo


def round_trip_phase(cavity: CavitySpec, frequency):
    """Theta(f) = 4 pi n f L / c + 2 phi_r(f) + phi_D, vectorized."""
    f = np.asarray(frequency, dtype=float)
    n = medium_index(cavity.medium, f)
    theta = (4.0 * math.pi * n * f * cavity.length / SPEED_OF_LIGHT
             + 2.0 * cavity.coating.phase_at(f) + cavity.geometric_phase)
    return theta if np.ndim(theta) else float(theta)


def cavity_field(cavity: CavitySpec, frequency):
    """Complex field transfer E(f); |E| = 1 exactly on resonance."""
    f = np.asarray(frequency, dtype=float)
    R = cavity.coating.reflectivity_at(f)
    theta = round_trip_phase(cavity, f)
    E = (1.0 - R) / (1.0 - R * np.exp(1j * np.asarray(theta)))
    return E if E.ndim else complex(E)


def transmitted_intensity(cavity: CavitySpec, frequency):
    """|E(f)|^2 without forming complex intermediates."""
    f = np.asarray(frequency, dtype=float)
    R = cavity.coating.reflectivity_at(f)
    theta = np.asarray(round_trip_phase(cavity, f))
    out = (1.0 - R) ** 2 / (1.0 + R * R - 2.0 * R * np.cos(theta))
    return out if out.ndim else float(out)


def _fwhm_estimate(cavity: CavitySpec, frequency: float) -> float:
    """Closed-form FWHM guess from local R and FSR, for solver step sizing."""
    R = float(cavity.coating.reflectivity_at(frequency))
    R = min(max(R, 1e-6), 1.0 - 1e-12)
    n = float(medium_index(cavity.medium, frequency))
    fsr = SPEED_OF_LIGHT / (2.0 * n * cavity.length)
    return fsr / finesse(R)


def find_resonance(cavity: CavitySpec, frequency: float,
                   tol_hz: float = 0.25) -> float:
    """Frequency of the cavity resonance nearest ``frequency``.

    Solves Theta(f) = nearest multiple of 2 pi by bracketing the phase
    residual and bisecting (Brent) to ``tol_hz``.
    """
    theta0 = float(round_trip_phase(cavity, frequency))
    target = _TWO_PI * round(theta0 / _TWO_PI)

    def g(f):
        return float(round_trip_phase(cavity, f)) - target

    g0 = theta0 - target
    if g0 == 0.0:
        return float(frequency)
    step = max(_fwhm_estimate(cavity, frequency) / 4.0, 4.0 * tol_hz)
    slope = (g(frequency + step) - g(frequency - step)) / (2.0 * step)
    if slope <= 0.0:
        # fall back to the dispersionless slope d(Theta)/df = 4 pi n L / c
        n = float(medium_index(cavity.medium, frequency))
        slope = 4.0 * math.pi * n * cavity.length / SPEED_OF_LIGHT
    root_guess = frequency - g0 / slope
    lo, hi = root_guess - step, root_guess + step
    for _ in range(80):
        glo, ghi = g(lo), g(hi)
        if glo == 0.0:
            return lo
        if ghi == 0.0:
            return hi
        if glo * ghi < 0.0:
            return float(brentq(g, lo, hi, xtol=tol_hz))
        width = hi - lo
        lo, hi = lo - width, hi + width
    raise NumericError(
        f"failed to bracket resonance near {frequency:.6e} Hz")


def local_fsr(cavity: CavitySpec, frequency: float) -> float:
    """Spacing between the two resonances straddling up from ``frequency``.

    Computed from two numerically solved adjacent resonances, so medium
    and mirror-phase dispersion are included.
    """
    f0 = find_resonance(cavity, frequency)
    n = float(medium_index(cavity.medium, f0))
    fsr_est = SPEED_OF_LIGHT / (2.0 * n * cavity.length)
    f1 = find_resonance(cavity, f0 + fsr_est)
    if f1 <= f0:
        raise NumericError("adjacent resonance search collapsed")
    return f1 - f0


def resonance_fwhm(cavity: CavitySpec, frequency: float) -> float:
    """Numerically measured full width at half maximum of the resonance
    nearest ``frequency``."""
    f_res = find_resonance(cavity, frequency, tol_hz=0.05)
    peak = float(transmitted_intensity(cavity, f_res))
    half = 0.5 * peak
    step = _fwhm_estimate(cavity, f_res) / 4.0

    def cross(direction):
        a = f_res
        for k in range(1, 4000):
            b = f_res + direction * k * step
            if float(transmitted_intensity(cavity, b)) < half:
                lo, hi = (a, b) if direction > 0 else (b, a)
                return float(brentq(
                    lambda f: float(transmitted_intensity(cavity, f)) - half,
                    lo, hi, xtol=1.0))
            a = b
        raise NumericError("half-intensity point not found within scan range")

    return cross(+1.0) - cross(-1.0)


def nominal_length(f_rep: float, m_filter: int, medium, coating,
                   lock_wavelength: float, mirror_radius: float = 0.5,
                   geometric_phase: float | None = None) -> float:
    """Cavity length at which the local FSR at the lock point equals
    m_filter * f_rep.

    In vacuum with frequency-flat mirror phase this is c/(2 m f_rep);
    with a medium or dispersive mirrors the condition is solved on the
    numerically measured resonance spacing.
    """
    if f_rep <= 0.0 or m_filter < 2:
        raise DomainError("need f_rep > 0 and m_filter >= 2")
    f_lock = SPEED_OF_LIGHT / lock_wavelength
    n_lock = float(medium_index(medium, f_lock))
    L0 = SPEED_OF_LIGHT / (2.0 * n_lock * m_filter * f_rep)

    def fsr_err(L):
        cav = CavitySpec(L, coating, mirror_radius=mirror_radius,
                         medium=medium, geometric_phase=geometric_phase)
        return local_fsr(cav, f_lock) - m_filter * f_rep

    lo, hi = 0.995 * L0, 1.005 * L0
    for _ in range(20):
        if lo <= 0.0 or hi >= 2.0 * mirror_radius:
            break
        if fsr_err(lo) > 0.0 > fsr_err(hi):
            L = float(brentq(fsr_err, lo, hi, xtol=1e-16))
            return L
        lo, hi = max(lo * 0.7, 0.25 * L0), min(hi * 1.4, 4.0 * L0)
    raise NumericError(
        f"no length in (0, {2.0 * mirror_radius}) matches FSR = "
        f"{m_filter} * {f_rep:.3e} Hz")


def _band_mode_data(comb: CombSpec, cavity: CavitySpec, lock: LockConfig,
                    tooth_offset: int | None):
    """Per-mode constants for the lock objective, restricted to the f1 band.

    Returns (K, B, R, weight) with Theta_k(L) = K_k L + B_k.
    """
    f_lo, f_hi = lock.band_frequency
    c_lo, c_hi = cavity.coating.frequency_domain
    idx, freq, power = _mode_arrays(comb, (max(f_lo, c_lo), min(f_hi, c_hi)))
    if idx.size == 0:
        raise DomainError("no comb mode inside the lock bandpass")
    if tooth_offset is not None:
        keep = (idx % lock.m_filter) == (tooth_offset % lock.m_filter)
        idx, freq, power = idx[keep], freq[keep], power[keep]
        if idx.size == 0:
            raise DomainError(
                f"no comb mode with index = {tooth_offset} (mod "
                f"{lock.m_filter}) inside the lock bandpass")
    n = np.asarray(medium_index(cavity.medium, freq), dtype=float)
    K = 4.0 * math.pi * n * freq / SPEED_OF_LIGHT
    B = 2.0 * np.asarray(cavity.coating.phase_at(freq)) + cavity.geometric_phase
    R = np.asarray(cavity.coating.reflectivity_at(freq))
    return K, B, R, power


def lock_cavity(comb: CombSpec, cavity: CavitySpec, lock: LockConfig, *,
                tooth_offset: int | None = None) -> float:
    """Locked cavity length: maximize band-integrated transmitted power.

    Objective O(L) = sum over f1-band modes of envelope * |E|^2,
    maximized by a grid over one resonance period at the lock wavelength
    (or 2 * search_halfwidth when configured) followed by golden-section
    refinement to 1e-15 m. With ``tooth_offset`` set, only comb indices
    congruent to it modulo m_filter count, which parks the resonances on
    that tooth class.
    """
    K, B, R, weight = _band_mode_data(comb, cavity, lock, tooth_offset)
    one_minus_R_sq = (1.0 - R) ** 2
    two_R = 2.0 * R
    one_plus_R_sq = 1.0 + R * R

    def objective(L_values):
        theta = np.multiply.outer(K, np.atleast_1d(L_values)) + B[:, None]
        trans = one_minus_R_sq[:, None] / (
            one_plus_R_sq[:, None] - two_R[:, None] * np.cos(theta))
        return weight @ trans

    f_lock = SPEED_OF_LIGHT / lock.filter_center
    n_lock = float(medium_index(cavity.medium, f_lock))
    period = lock.filter_center / (2.0 * n_lock)
    half = lock.search_halfwidth if lock.search_halfwidth is not None \
        else 0.5 * period
    R_lock = float(cavity.coating.reflectivity_at(f_lock))
    R_lock = min(max(R_lock, 0.5), 1.0 - 1e-9)
    step = period / (8.0 * finesse(R_lock))
    n_grid = int(math.ceil(2.0 * half / step)) + 1
    if n_grid > 400001:
        n_grid = 400001
    grid = np.linspace(cavity.length - half, cavity.length + half, n_grid)
    vals = objective(grid)
    if not np.all(np.isfinite(vals)):
        raise NumericError("lock objective not finite over the search grid")
    if np.max(vals) <= 0.0:
        raise NumericError("flat lock objective: no mode transmits anywhere")
    if np.ptp(vals) <= 1e-12 * np.max(vals):
        # transparent cavity: every length transmits equally, keep the input
        return cavity.length
    i = int(np.argmax(vals))
    a = grid[max(i - 2, 0)]
    b = grid[min(i + 2, n_grid - 1)]

    # golden-section maximization on [a, b]
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = float(objective(x1)[0])
    f2 = float(objective(x2)[0])
    while b - a > 1e-15:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = float(objective(x2)[0])
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = float(objective(x1)[0])
    return 0.5 * (a + b)


def delta_nu_cc(comb: CombSpec, cavity: CavitySpec, frequency: float) -> float:
    """Offset of the cavity resonance from the nearest comb mode [Hz].

    Positive when the resonance sits above the comb mode; the result lies
    in (-FSR/2, +FSR/2] by construction of the nearest-resonance search.
    """
    n = nearest_mode_index(comb, frequency)
    f_mode = n * comb.f_rep + comb.f_o
    f_res = find_resonance(cavity, f_mode)
    return f_res - f_mode


def relock(cavity: CavitySpec, length: float) -> CavitySpec:
    """Copy of ``cavity`` at a new length.

    The geometric phase is kept as-is: servo-scale length changes move
    the Gouy phase by far less than the mirror phase tolerance, and
    explicit user overrides must survive a re-lock.
    """
    return replace(cavity, length=length)
