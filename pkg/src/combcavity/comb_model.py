"""Frequency-comb representation.

A mode-locked laser emits a set of equally spaced optical modes

    f_N = N * f_rep + f_o,   N integer,

with a slowly varying power envelope and a common (Gaussian) linewidth.
The comb is represented by its frequency law plus a sampled envelope;
individual modes are materialized on demand by :func:`sample_comb`.

Conventions:
  * all frequencies in Hz, wavelengths in m;
  * the envelope is spectral power density in arbitrary units,
    piecewise-linear between samples and 0 outside the sampled domain;
  * input mode phases are zero (any phase structure is imposed later by
    the filter cavity).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import DomainError

_FOUR_LN2 = 4.0 * math.log(2.0)


@dataclass(frozen=True, eq=False)
class CombSpec:
    """Comb frequency law, mode-index range, envelope, and linewidth.

    ``envelope_frequency`` must be strictly increasing and, together with
    ``envelope_power``, cover the full mode range [f(n_min), f(n_max)].
    ``linewidth_fwhm`` = 0 models delta-function modes.
    """

    f_rep: float
    f_o: float
    n_min: int
    n_max: int
    envelope_frequency: np.ndarray
    envelope_power: np.ndarray
    linewidth_fwhm: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "envelope_frequency",
                           np.asarray(self.envelope_frequency, dtype=float))
        object.__setattr__(self, "envelope_power",
                           np.asarray(self.envelope_power, dtype=float))
        if not self.f_rep > 0.0:
            raise DomainError(f"f_rep must be positive, got {self.f_rep}")
        if not 0.0 <= self.f_o < self.f_rep:
            raise DomainError(
                f"f_o must satisfy 0 <= f_o < f_rep, got f_o={self.f_o}")
        if self.n_min > self.n_max:
            raise DomainError(
                f"empty mode range: n_min={self.n_min} > n_max={self.n_max}")
        if self.n_min < 0:
            raise DomainError("mode indices must be non-negative")
        env_f, env_p = self.envelope_frequency, self.envelope_power
        if env_f.ndim != 1 or env_f.shape != env_p.shape or env_f.size < 2:
            raise DomainError("envelope needs >= 2 matching-length samples")
        if not np.all(np.diff(env_f) > 0.0):
            raise DomainError("envelope frequencies must be strictly increasing")
        if np.any(env_p < 0.0):
            raise DomainError("envelope power samples must be non-negative")
        if self.linewidth_fwhm < 0.0:
            raise DomainError(
                f"linewidth_fwhm must be >= 0, got {self.linewidth_fwhm}")
        f_lo = self.n_min * self.f_rep + self.f_o
        f_hi = self.n_max * self.f_rep + self.f_o
        if f_lo < env_f[0] or f_hi > env_f[-1]:
            raise DomainError(
                "envelope domain [{:.6e}, {:.6e}] Hz does not cover the mode "
                "range [{:.6e}, {:.6e}] Hz".format(env_f[0], env_f[-1], f_lo, f_hi))

    @classmethod
    def from_envelope(cls, f_rep: float, f_o: float,
                      envelope_frequency, envelope_power,
                      linewidth_fwhm: float = 0.0) -> "CombSpec":
        """Build a comb whose mode range spans the envelope domain.

        One mode of margin is left at each edge so that offset shifts by
        up to one f_rep keep every mode inside the envelope domain.
        """
        env_f = np.asarray(envelope_frequency, dtype=float)
        if env_f.size < 2:
            raise DomainError("envelope needs >= 2 samples")
        n_min = int(math.ceil((env_f[0] - f_o) / f_rep)) + 1
        n_max = int(math.floor((env_f[-1] - f_o) / f_rep)) - 1
        return cls(f_rep, f_o, n_min, n_max, env_f,
                   np.asarray(envelope_power, dtype=float), linewidth_fwhm)

    def envelope_at(self, frequency) -> np.ndarray:
        """Piecewise-linear envelope power; 0 outside the sampled domain."""
        return np.interp(frequency, self.envelope_frequency,
                         self.envelope_power, left=0.0, right=0.0)


@dataclass(frozen=True)
class ModeField:
    """A single comb mode: index, optical frequency, complex amplitude."""

    index: int
    frequency: float
    amplitude: complex


def mode_frequency(spec: CombSpec, n: int) -> float:
    """Frequency of mode ``n``: n*f_rep + f_o."""
    if not spec.n_min <= n <= spec.n_max:
        raise DomainError(
            f"mode index {n} outside [{spec.n_min}, {spec.n_max}]")
    return n * spec.f_rep + spec.f_o


def nearest_mode_index(spec: CombSpec, frequency: float) -> int:
    """Index of the comb mode closest to ``frequency``."""
    n = int(round((frequency - spec.f_o) / spec.f_rep))
    if not spec.n_min <= n <= spec.n_max:
        raise DomainError(
            f"frequency {frequency:.6e} Hz maps to index {n}, outside "
            f"[{spec.n_min}, {spec.n_max}]")
    return n


def _mode_arrays(spec: CombSpec, band: tuple[float, float]):
    """Indices, frequencies, and envelope powers of modes inside ``band``.

    Vectorized workhorse behind sample_comb and the filter pipeline.
    Returns (indices, frequencies, powers) with contiguous integer indices;
    all arrays are empty when no mode falls inside the band.
    """
    f_lo, f_hi = band
    if f_hi < f_lo:
        raise DomainError(f"band must satisfy lo <= hi, got {band}")
    n_lo = max(spec.n_min, int(math.ceil((f_lo - spec.f_o) / spec.f_rep)))
    n_hi = min(spec.n_max, int(math.floor((f_hi - spec.f_o) / spec.f_rep)))
    if n_lo > n_hi:
        empty = np.empty(0)
        return empty.astype(np.int64), empty, empty
    idx = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    freq = idx.astype(float) * spec.f_rep + spec.f_o
    return idx, freq, spec.envelope_at(freq)


def sample_comb(spec: CombSpec, band: tuple[float, float]) -> list[ModeField]:
    """One ModeField per comb index inside ``band`` (possibly empty).

    Amplitude magnitude is sqrt(envelope power); input phase is zero.
    """
    idx, freq, power = _mode_arrays(spec, band)
    amps = np.sqrt(power)
    return [ModeField(int(n), float(f), complex(a))
            for n, f, a in zip(idx, freq, amps)]


def shift_offset(spec: CombSpec, delta: float) -> CombSpec:
    """Comb translated rigidly by ``delta`` Hz (every mode moves by delta).

    The offset is folded back into [0, f_rep) with a matching relabeling
    of the mode indices, so the frequency set is exactly the input set
    plus delta. Requires the envelope margin left by from_envelope when
    |delta| approaches f_rep.
    """
    total = spec.f_o + delta
    wraps = math.floor(total / spec.f_rep)
    f_o_new = total - wraps * spec.f_rep
    if f_o_new >= spec.f_rep:               # guard against float roundoff
        f_o_new -= spec.f_rep
        wraps += 1
    return CombSpec(spec.f_rep, f_o_new, spec.n_min + wraps,
                    spec.n_max + wraps, spec.envelope_frequency,
                    spec.envelope_power, spec.linewidth_fwhm)


def gaussian_line(delta, fwhm: float):
    """Unit-peak Gaussian line profile exp(-4 ln2 delta^2 / fwhm^2).

    Value is exactly 0.5 at |delta| = fwhm/2.
    """
    if fwhm <= 0.0:
        raise DomainError(f"fwhm must be positive, got {fwhm}")
    d = np.asarray(delta, dtype=float)
    out = np.exp(-_FOUR_LN2 * (d / fwhm) ** 2)
    return out if out.ndim else float(out)


def flat_envelope(f_lo: float, f_hi: float, power: float = 1.0):
    """Constant-power envelope arrays over [f_lo, f_hi]."""
    if not 0.0 < f_lo < f_hi:
        raise DomainError(f"need 0 < f_lo < f_hi, got ({f_lo}, {f_hi})")
    return np.array([f_lo, f_hi]), np.array([power, power])


def load_envelope(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a `wavelength_nm,power` CSV into (frequency Hz, power) arrays.

    The file must have a header row and strictly increasing wavelengths;
    the returned arrays are ordered by increasing frequency.
    """
    wavelengths, powers = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["wavelength_nm", "power"]:
            raise DomainError(
                f"{path}: expected header 'wavelength_nm,power', got {header}")
        for i, row in enumerate(reader, start=2):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                lam, p = float(row[0]), float(row[1])
            except (ValueError, IndexError) as exc:
                raise DomainError(f"{path}: bad row {i}: {row}") from exc
            if p < 0.0:
                raise DomainError(f"{path}: negative power at row {i}")
            wavelengths.append(lam)
            powers.append(p)
    if len(wavelengths) < 2:
        raise DomainError(f"{path}: need >= 2 envelope samples")
    lam = np.asarray(wavelengths) * 1e-9
    if not np.all(np.diff(lam) > 0.0):
        raise DomainError(f"{path}: wavelengths must be strictly increasing")
    freq = SPEED_OF_LIGHT / lam[::-1]
    return freq, np.asarray(powers)[::-1].copy()
