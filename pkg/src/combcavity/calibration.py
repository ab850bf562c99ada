"""Synthetic spectrograph rendering and calibration-line fitting.

A filtered comb is dispersed onto a 1-D detector: every mode (passed
teeth and residual side modes alike) becomes a Gaussian of area
proportional to its transmitted power, plus optional Poisson photon
noise and Gaussian read noise. Two estimators are then compared:

  * fit_per_line: independent 4-parameter Gaussians in +-b/2 windows;
  * fit_constrained: one 5-parameter model for the whole frame,
        y(x) = e + a * sum_N exp(-c (x - b N - d)^2),  N = 0..n-1,
    sharing peak height a, spacing b, inverse squared width c, global
    shift d (referenced to line N = 0), and floor e.

The constrained model is the calibration product: d is the single
wavelength-solution shift, convertible to a radial velocity via
rv_equivalent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import find_peaks

from .constants import SPEED_OF_LIGHT
from .errors import DomainError, FitError
from .filter_analysis import FilteredSpectrum

_FOUR_LN2 = 4.0 * math.log(2.0)


@dataclass(frozen=True)
class SpectrographModel:
    """1-D detector: linear dispersion, Gaussian PSF, simple noise model."""

    pixels: int
    dispersion: float            # Hz per pixel
    psf_sigma: float             # pixels
    reference_frequency: float   # Hz at pixel 0
    photon_noise: bool = False
    read_noise_sigma: float = 0.0
    exposure_scale: float = 1.0  # counts per unit mode power

    def __post_init__(self):
        if self.pixels < 16:
            raise DomainError(f"need >= 16 pixels, got {self.pixels}")
        if self.dispersion <= 0.0:
            raise DomainError(f"dispersion must be > 0, got {self.dispersion}")
        if self.psf_sigma <= 0.0:
            raise DomainError(f"psf_sigma must be > 0, got {self.psf_sigma}")
        if self.read_noise_sigma < 0.0:
            raise DomainError("read_noise_sigma must be >= 0")
        if self.exposure_scale <= 0.0:
            raise DomainError("exposure_scale must be > 0")


@dataclass(frozen=True, eq=False)
class CalibrationFitResult:
    """Constrained 5-parameter fit with covariance and fit-quality figures."""

    a: float
    b: float
    c: float
    d: float
    e: float
    covariance: np.ndarray
    residual_rms: float
    reduced_chi2: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0 and self.c > 0.0):
            raise DomainError(
                f"invalid fit: a={self.a}, b={self.b}, c={self.c} must be > 0")
        cov = np.asarray(self.covariance, dtype=float)
        if cov.shape != (5, 5):
            raise DomainError("covariance must be 5x5")
        if not np.allclose(cov, cov.T, atol=1e-10 * max(1.0, np.abs(cov).max())):
            raise DomainError("covariance must be symmetric")
        eigmin = float(np.linalg.eigvalsh(0.5 * (cov + cov.T)).min())
        if eigmin < -1e-9 * max(1.0, float(np.abs(cov).max())):
            raise DomainError("covariance must be positive semidefinite")
        object.__setattr__(self, "covariance", 0.5 * (cov + cov.T))

    @property
    def parameters(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d, self.e])

    @property
    def uncertainties(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))


@dataclass(frozen=True, eq=False)
class PerLineFitResult:
    """Independent 4-parameter Gaussian fits, one per detected line."""

    amplitudes: np.ndarray
    inv_widths: np.ndarray       # c_i, pixels^-2
    positions: np.ndarray        # pixels
    offsets: np.ndarray
    covariances: np.ndarray      # (n, 4, 4), order (a, c, p, e)
    blended: np.ndarray          # True when the window likely truncates the line

    def __post_init__(self):
        if np.any(self.inv_widths <= 0.0):
            raise DomainError("per-line widths must be positive")

    @property
    def sigmas(self) -> np.ndarray:
        """Gaussian sigma per line [px]."""
        return 1.0 / np.sqrt(2.0 * self.inv_widths)


def render_ccd(spectrum: FilteredSpectrum, model: SpectrographModel,
               seed: int) -> np.ndarray:
    """Render transmitted modes to pixel counts; deterministic under seed.

    Each mode contributes a normalized Gaussian of area
    exposure_scale * |amplitude|^2 centered at (f - reference)/dispersion,
    evaluated out to +-8 sigma. Poisson noise is applied to the signal
    when enabled, then additive Gaussian read noise.
    """
    centers = (spectrum.frequencies - model.reference_frequency) \
        / model.dispersion
    powers = np.abs(spectrum.amplitudes) ** 2
    on_detector = (centers >= 0.0) & (centers <= model.pixels - 1)
    if not np.any(on_detector & (powers > 0.0)):
        raise DomainError("no transmitted mode maps onto the detector")

    frame = np.zeros(model.pixels)
    x = np.arange(model.pixels, dtype=float)
    sigma = model.psf_sigma
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    reach = 8.0 * sigma
    for p, pw in zip(centers, powers):
        if pw <= 0.0 or p < -reach or p > model.pixels - 1 + reach:
            continue
        lo = max(int(math.floor(p - reach)), 0)
        hi = min(int(math.ceil(p + reach)) + 1, model.pixels)
        u = (x[lo:hi] - p) / sigma
        frame[lo:hi] += model.exposure_scale * pw * norm \
            * np.exp(-0.5 * u * u)

    rng = np.random.default_rng(seed)
    if model.photon_noise:
        frame = rng.poisson(frame).astype(float)
    if model.read_noise_sigma > 0.0:
        frame = frame + rng.normal(0.0, model.read_noise_sigma, frame.size)
    return frame


def _detect_lines(y: np.ndarray, n_lines: int):
    """Positions, heights, floor, and spacing of the n_lines tallest peaks."""
    floor = float(np.percentile(y, 25.0))
    height = floor + 0.2 * (float(y.max()) - floor)
    peaks, props = find_peaks(y, height=height)
    if peaks.size < n_lines:
        raise FitError(
            f"found {peaks.size} candidate lines, need {n_lines}")
    if peaks.size > n_lines:
        top = np.argsort(props["peak_heights"])[-n_lines:]
        peaks = np.sort(peaks[top])
    heights = y[peaks] - floor

    # FWHM of the tallest peak from half-maximum crossings
    p = int(peaks[np.argmax(heights)])
    half = floor + 0.5 * (y[p] - floor)
    lo = p
    while lo > 0 and y[lo] > half:
        lo -= 1
    hi = p
    while hi < y.size - 1 and y[hi] > half:
        hi += 1
    fwhm = max(hi - lo - 1.0, 1.0)
    spacing = float(np.median(np.diff(peaks))) if peaks.size > 1 else float(y.size)
    return peaks.astype(float), heights, floor, spacing, fwhm


def _constrained_model(params, x, n_lines):
    a, b, c, d, e = params
    centers = b * np.arange(n_lines) + d
    g = np.exp(-c * (x[:, None] - centers[None, :]) ** 2)
    return e + a * g.sum(axis=1), g, centers


def fit_constrained(pixels: np.ndarray, n_lines: int, init=None,
                    weights=None) -> CalibrationFitResult:
    """Fit the 5-parameter equally-spaced Gaussian sum to a frame.

    init: optional (a, b, c, d, e); otherwise peak detection provides it.
    weights: optional per-pixel 1/sigma values; the covariance and the
    reduced chi-square are computed in the corresponding metric.
    Raises FitError (with .last_iterate) if the optimizer does not reach
    its gradient tolerance within 200 evaluations.
    """
    y = np.asarray(pixels, dtype=float)
    if n_lines < 3:
        raise DomainError(f"need n_lines >= 3, got {n_lines}")
    x = np.arange(y.size, dtype=float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != y.shape or np.any(w <= 0.0):
        raise DomainError("weights must be positive and match the frame")

    if init is None:
        peaks, heights, floor, spacing, fwhm = _detect_lines(y, n_lines)
        c0 = _FOUR_LN2 / fwhm ** 2
        p0 = np.array([float(np.median(heights)), spacing, c0,
                       float(peaks[0]), floor])
    else:
        p0 = np.asarray(init, dtype=float)
        if p0.shape != (5,):
            raise DomainError("init must be (a, b, c, d, e)")

    def residuals(params):
        model, _, _ = _constrained_model(params, x, n_lines)
        return w * (model - y)

    def jacobian(params):
        a, b, c, d, e = params
        _, g, centers = _constrained_model(params, x, n_lines)
        dx = x[:, None] - centers[None, :]
        n_idx = np.arange(n_lines)[None, :]
        J = np.empty((y.size, 5))
        J[:, 0] = g.sum(axis=1)
        J[:, 1] = a * np.sum(g * 2.0 * c * dx * n_idx, axis=1)
        J[:, 2] = -a * np.sum(g * dx * dx, axis=1)
        J[:, 3] = a * np.sum(g * 2.0 * c * dx, axis=1)
        J[:, 4] = 1.0
        return J * w[:, None]

    sol = least_squares(residuals, p0, jac=jacobian, method="lm",
                        gtol=1e-10, xtol=1e-14, ftol=1e-14, max_nfev=200)
    if sol.status <= 0:
        raise FitError("constrained fit did not converge in 200 evaluations",
                       last_iterate=sol.x)
    a, b, c, d, e = sol.x
    dof = max(y.size - 5, 1)
    chi2 = float(np.sum(sol.fun ** 2))
    J = jacobian(sol.x)
    JtJ = J.T @ J
    try:
        cov = np.linalg.inv(JtJ)
    except np.linalg.LinAlgError as exc:
        raise FitError("singular normal equations in the constrained fit",
                       last_iterate=sol.x) from exc
    if weights is None:
        cov = cov * (chi2 / dof)
    raw_resid = (sol.fun / w)
    return CalibrationFitResult(
        float(a), float(b), float(c), float(d), float(e), cov,
        float(np.sqrt(np.mean(raw_resid ** 2))), chi2 / dof)


def fit_per_line(pixels: np.ndarray, n_lines: int) -> PerLineFitResult:
    """Fit each detected line independently in a +-spacing/2 window.

    Four parameters per line: amplitude above offset, inverse squared
    width, position, offset. Lines whose fitted width spills out of the
    window (2 sigma > half-window) are flagged as blended: their
    positions carry windowing bias.
    """
    y = np.asarray(pixels, dtype=float)
    peaks, heights, floor, spacing, fwhm = _detect_lines(y, n_lines)
    half = spacing / 2.0
    c0 = _FOUR_LN2 / fwhm ** 2
    x_all = np.arange(y.size, dtype=float)

    amps, cs, poss, offs, covs, blend = [], [], [], [], [], []
    for p, h in zip(peaks, heights):
        lo = max(int(round(p - half)), 0)
        hi = min(int(round(p + half)) + 1, y.size)
        xs, ys = x_all[lo:hi], y[lo:hi]
        if xs.size < 5:
            raise FitError(f"window around pixel {p:.1f} too small to fit")

        def residuals(q):
            a, c, pos, e = q
            return e + a * np.exp(-c * (xs - pos) ** 2) - ys

        def jacobian(q):
            a, c, pos, e = q
            dx = xs - pos
            g = np.exp(-c * dx * dx)
            return np.column_stack([g, -a * g * dx * dx,
                                    a * g * 2.0 * c * dx, np.ones_like(xs)])

        sol = least_squares(residuals, np.array([h, c0, p, floor]),
                            jac=jacobian, method="lm", gtol=1e-10,
                            xtol=1e-14, ftol=1e-14, max_nfev=200)
        if sol.status <= 0:
            raise FitError(
                f"per-line fit at pixel {p:.1f} did not converge",
                last_iterate=sol.x)
        a, c, pos, e = sol.x
        if not 0.0 <= pos <= y.size - 1:
            raise FitError(
                f"fitted position {pos:.2f} px outside the detector",
                last_iterate=sol.x)
        J = jacobian(sol.x)
        dof = max(xs.size - 4, 1)
        try:
            cov = np.linalg.inv(J.T @ J) * float(np.sum(sol.fun ** 2)) / dof
        except np.linalg.LinAlgError as exc:
            raise FitError(
                f"singular normal equations for the line at pixel {p:.1f}",
                last_iterate=sol.x) from exc
        sigma = 1.0 / math.sqrt(2.0 * max(c, 1e-300))
        amps.append(float(a))
        cs.append(float(c))
        poss.append(float(pos))
        offs.append(float(e))
        covs.append(cov)
        blend.append(bool(2.0 * sigma > half))
    return PerLineFitResult(np.array(amps), np.array(cs), np.array(poss),
                            np.array(offs), np.array(covs), np.array(blend))


def rv_equivalent(delta_f: float, at_frequency: float) -> float:
    """Radial velocity c * delta_f / at_frequency [m/s]."""
    if at_frequency <= 0.0:
        raise DomainError(f"at_frequency must be positive, got {at_frequency}")
    return SPEED_OF_LIGHT * delta_f / at_frequency
