"""Mirror reflectivity and reflection phase versus frequency.

Two sources of coating data:
  * measured tables (CSV `wavelength_nm,reflectivity,phase_rad`), and
  * synthetic thin-film stacks evaluated with the characteristic-matrix
    method at normal incidence.

Either way the result is a CoatingModel: cubic interpolation of R and of
the unwrapped reflection phase over *frequency* (interpolating in
wavelength would introduce systematic curvature error in the resonance
analysis). Queries outside the sampled domain are errors. Interpolated R
is clamped to [0, 1) so downstream cavity math never sees R = 1.

The repo-default coating is a quarter-wave Bragg stack centered at
910 nm with peak R = 0.992; see reference_bragg_design.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .constants import SPEED_OF_LIGHT
from .errors import DomainError

_R_CEILING = 1.0 - 1e-12


@dataclass(frozen=True, eq=False)
class CoatingModel:
    """Tabulated mirror response: R and unwrapped phase vs frequency [Hz].

    Samples must be ascending in frequency, with 0 <= R < 1 everywhere.
    """

    frequency: np.ndarray
    reflectivity: np.ndarray
    phase_rad: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequency, dtype=float)
        r = np.asarray(self.reflectivity, dtype=float)
        p = np.asarray(self.phase_rad, dtype=float)
        if f.ndim != 1 or f.shape != r.shape or f.shape != p.shape:
            raise DomainError("frequency/reflectivity/phase must be equal-length 1-D")
        if f.size < 4:
            raise DomainError(
                f"need >= 4 samples for cubic interpolation, got {f.size}")
        if not np.all(np.diff(f) > 0.0):
            raise DomainError("sample frequencies must be strictly increasing")
        if np.any(r < 0.0) or np.any(r >= 1.0):
            raise DomainError("reflectivity samples must lie in [0, 1)")
        if not np.all(np.isfinite(p)):
            raise DomainError("phase samples must be finite")
        object.__setattr__(self, "frequency", f)
        object.__setattr__(self, "reflectivity", r)
        object.__setattr__(self, "phase_rad", p)
        object.__setattr__(self, "_r_spline", CubicSpline(f, r))
        object.__setattr__(self, "_phi_spline", CubicSpline(f, p))

    @classmethod
    def from_wavelength_samples(cls, wavelength_m, reflectivity,
                                phase_rad) -> "CoatingModel":
        """Build from wavelength-ascending samples; phase is unwrapped over frequency."""
        lam = np.asarray(wavelength_m, dtype=float)
        if lam.ndim != 1 or lam.size < 4:
            raise DomainError(f"need >= 4 samples, got {lam.size}")
        if np.any(lam <= 0.0):
            raise DomainError("wavelengths must be positive")
        if not np.all(np.diff(lam) > 0.0):
            raise DomainError("wavelengths must be strictly increasing")
        order = slice(None, None, -1)            # ascending frequency
        freq = SPEED_OF_LIGHT / lam[order]
        phase = np.unwrap(np.asarray(phase_rad, dtype=float)[order])
        return cls(freq, np.asarray(reflectivity, dtype=float)[order].copy(),
                   phase)

    @property
    def frequency_domain(self) -> tuple[float, float]:
        return float(self.frequency[0]), float(self.frequency[-1])

    @property
    def wavelength_domain(self) -> tuple[float, float]:
        return (SPEED_OF_LIGHT / float(self.frequency[-1]),
                SPEED_OF_LIGHT / float(self.frequency[0]))

    def _check_domain(self, f: np.ndarray):
        lo, hi = self.frequency[0], self.frequency[-1]
        if np.any(f < lo) or np.any(f > hi):
            raise DomainError(
                "query outside coating domain [{:.6e}, {:.6e}] Hz".format(lo, hi))

    def reflectivity_at(self, frequency):
        """Interpolated R, clamped to [0, 1)."""
        f = np.asarray(frequency, dtype=float)
        self._check_domain(f)
        r = np.clip(self._r_spline(f), 0.0, _R_CEILING)
        return r if r.ndim else float(r)

    def phase_at(self, frequency):
        """Interpolated reflection phase on the continuous branch [rad]."""
        f = np.asarray(frequency, dtype=float)
        self._check_domain(f)
        p = self._phi_spline(f)
        return p if p.ndim else float(p)


@dataclass(frozen=True)
class StackDesign:
    """Thin-film stack at normal incidence, layers listed from incident side."""

    substrate_index: float
    incident_index: float
    layers: tuple  # of (refractive index, physical thickness m)

    def __post_init__(self):
        if self.substrate_index < 1.0 or self.incident_index < 1.0:
            raise DomainError("substrate and incident indices must be >= 1")
        object.__setattr__(self, "layers", tuple(tuple(l) for l in self.layers))
        for i, (n, d) in enumerate(self.layers):
            if n < 1.0:
                raise DomainError(f"layer {i}: index {n} must be >= 1")
            if d <= 0.0:
                raise DomainError(f"layer {i}: thickness {d} must be > 0")


def stack_reflection(design: StackDesign, wavelength):
    """(R, phase) of the stack at vacuum ``wavelength`` [m], vectorized.

    Characteristic-matrix method: (B, C) starts at the substrate
    admittance and is propagated through the layers toward the incident
    medium; r = (n0 B - C)/(n0 B + C). Lossless layers guarantee R <= 1.
    """
    lam = np.asarray(wavelength, dtype=float)
    if np.any(lam <= 0.0):
        raise DomainError("wavelength must be positive")
    B = np.ones_like(lam, dtype=complex)
    C = np.full_like(B, design.substrate_index)
    for n, d in reversed(design.layers):
        delta = 2.0 * math.pi * n * d / lam
        cd, sd = np.cos(delta), np.sin(delta)
        B, C = cd * B + 1j * sd * C / n, 1j * n * sd * B + cd * C
    n0 = design.incident_index
    r = (n0 * B - C) / (n0 * B + C)
    R = np.abs(r) ** 2
    phase = np.angle(r)
    if R.ndim:
        return R, phase
    return float(R), float(phase)


def quarter_wave_stack(center_wavelength: float, n_high: float, n_low: float,
                       pairs: int, substrate_index: float = 1.5,
                       incident_index: float = 1.0) -> StackDesign:
    """(H, L) x pairs quarter-wave Bragg stack, high-index layer outermost."""
    if center_wavelength <= 0.0:
        raise DomainError("center_wavelength must be positive")
    if pairs < 1:
        raise DomainError("need at least one layer pair")
    layers = []
    for _ in range(pairs):
        layers.append((n_high, center_wavelength / (4.0 * n_high)))
        layers.append((n_low, center_wavelength / (4.0 * n_low)))
    return StackDesign(substrate_index, incident_index, tuple(layers))


# Default synthetic coating: 910 nm quarter-wave Bragg whose high index is
# solved so that the peak reflectivity is exactly 0.992 with 7 pairs on an
# n = 1.5 substrate (usable filter band roughly 100 nm wide).
BRAGG_CENTER_WAVELENGTH = 910e-9
_BRAGG_PAIRS = 7
_BRAGG_N_LOW = 1.45
_BRAGG_N_SUBSTRATE = 1.5
_BRAGG_N_HIGH = 2.195074015922592


def reference_bragg_design() -> StackDesign:
    """The repo-default 910 nm Bragg stack (peak R = 0.992)."""
    return quarter_wave_stack(BRAGG_CENTER_WAVELENGTH, _BRAGG_N_HIGH,
                              _BRAGG_N_LOW, _BRAGG_PAIRS,
                              substrate_index=_BRAGG_N_SUBSTRATE)


def reference_bragg_coating(wavelength_min: float = 700e-9,
                            wavelength_max: float = 1150e-9,
                            n_samples: int = 1801) -> CoatingModel:
    """Default coating sampled from reference_bragg_design."""
    lam = np.linspace(wavelength_min, wavelength_max, n_samples)
    R, phase = stack_reflection(reference_bragg_design(), lam)
    return CoatingModel.from_wavelength_samples(lam, np.minimum(R, _R_CEILING),
                                                phase)


def constant_coating(reflectivity: float, phase: float,
                     wavelength_min: float, wavelength_max: float,
                     n_samples: int = 16) -> CoatingModel:
    """Frequency-flat coating over a wavelength band."""
    if not 0.0 <= reflectivity < 1.0:
        raise DomainError(f"reflectivity must be in [0, 1), got {reflectivity}")
    lam = np.linspace(wavelength_min, wavelength_max, n_samples)
    return CoatingModel.from_wavelength_samples(
        lam, np.full(n_samples, reflectivity), np.full(n_samples, phase))


def detrend_phase(model: CoatingModel) -> CoatingModel:
    """Remove the best-fit linear-in-frequency phase slope (propagation delay).

    Only the slope term is subtracted; any constant phase offset stays.
    Idempotent: the output's best-fit slope is 0.
    """
    f, p = model.frequency, model.phase_rad
    fc = f - f.mean()
    slope = float(np.dot(fc, p - p.mean()) / np.dot(fc, fc))
    return CoatingModel(f, model.reflectivity.copy(), p - slope * f)


def phase_tolerance(reflectivity: float) -> float:
    """Largest per-mirror phase error a cavity of reflectivity R tolerates.

    (1 - R)/sqrt(R): the round-trip phase at which the transmitted
    intensity falls to half of its resonant value.
    """
    if not 0.0 < reflectivity < 1.0:
        raise DomainError(f"reflectivity must be in (0, 1), got {reflectivity}")
    return (1.0 - reflectivity) / math.sqrt(reflectivity)


def load_coating(path) -> CoatingModel:
    """Read a `wavelength_nm,reflectivity,phase_rad` CSV into a CoatingModel.

    Lines starting with `#` are comments. Requires >= 4 data rows with
    strictly increasing wavelengths and R in [0, 1).
    """
    lam, refl, phase = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = None
        for i, row in enumerate(reader, start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [h.strip() for h in row]
                if header[:3] != ["wavelength_nm", "reflectivity", "phase_rad"]:
                    raise DomainError(
                        f"{path}: expected header "
                        f"'wavelength_nm,reflectivity,phase_rad', got {row}")
                continue
            try:
                w, r, p = float(row[0]), float(row[1]), float(row[2])
            except (ValueError, IndexError) as exc:
                raise DomainError(f"{path}: bad row {i}: {row}") from exc
            if not 0.0 <= r < 1.0:
                raise DomainError(
                    f"{path}: row {i}: reflectivity {r} outside [0, 1)")
            lam.append(w * 1e-9)
            refl.append(r)
            phase.append(p)
    if len(lam) < 4:
        raise DomainError(f"{path}: need >= 4 data rows, got {len(lam)}")
    lam = np.asarray(lam)
    if not np.all(np.diff(lam) > 0.0):
        raise DomainError(f"{path}: wavelengths must be strictly increasing")
    return CoatingModel.from_wavelength_samples(lam, np.asarray(refl),
                                                np.asarray(phase))


def write_coating_csv(model: CoatingModel, path, comment: str | None = None):
    """Write a CoatingModel back to CSV (increasing wavelength, full precision)."""
    lam = SPEED_OF_LIGHT / model.frequency[::-1]
    refl = model.reflectivity[::-1]
    phase = model.phase_rad[::-1]
    with open(path, "w", newline="") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write("wavelength_nm,reflectivity,phase_rad\n")
        for w, r, p in zip(lam, refl, phase):
            fh.write(f"{w * 1e9:.17g},{r:.17g},{p:.17g}\n")
