"""Refractive index of moist air via the Ciddor procedure.

Full refractometric formulation: two-term dry-air dispersion with CO2
correction, water-vapor dispersion, saturation vapor pressure with an
over-ice branch, enhancement factor, compressibility, and the two-density
mixing rule. Validity: wavelength 0.3 to 1.7 um, temperature -40 to
+100 C. Zero pressure returns exactly 1 (vacuum limit).

Simpler Edlen-style fits are deliberately not used: the cavity bandwidth
bound is sensitive to index differences at the 1e-7 level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import TORR_TO_PA
from .errors import DomainError

_GAS_CONSTANT = 8.314510     # J/(mol K), value used by the source formulation
_M_WATER = 0.018015          # kg/mol

# Dry-air dispersion (15 C, 101325 Pa, 450 ppm CO2), sigma^2 in um^-2
_K0, _K1, _K2, _K3 = 238.0185, 5792105.0, 57.362, 167917.0
# Water-vapor dispersion, scaled by 1.022
_W0, _W1, _W2, _W3 = 295.235, 2.6422, -0.032380, 0.004028

# Saturation vapor pressure over water, T in K
_SVP_A = 1.2378847e-5
_SVP_B = -1.9121316e-2
_SVP_C = 33.93711047
_SVP_D = -6.3431645e3

# Enhancement factor f(p, t)
_EF_ALPHA, _EF_BETA, _EF_GAMMA = 1.00062, 3.14e-8, 5.6e-7


@dataclass(frozen=True)
class AirConditions:
    """Laboratory air state: temperature [C], pressure [Pa], RH [0..1], CO2 [ppm]."""

    temperature_c: float
    pressure_pa: float
    relative_humidity: float = 0.0
    co2_ppm: float = 450.0

    def __post_init__(self):
        if not -40.0 <= self.temperature_c <= 100.0:
            raise DomainError(
                f"temperature {self.temperature_c} C outside [-40, 100] C")
        if self.pressure_pa < 0.0:
            raise DomainError(f"pressure must be >= 0, got {self.pressure_pa}")
        if not 0.0 <= self.relative_humidity <= 1.0:
            raise DomainError(
                f"relative_humidity must be in [0, 1], got {self.relative_humidity}")
        if self.co2_ppm < 0.0:
            raise DomainError(f"co2_ppm must be >= 0, got {self.co2_ppm}")


STANDARD_AIR = AirConditions(15.0, 101325.0, 0.0, 450.0)
# 24 C, 630 Torr, 30 % RH, 400 ppm: a mile-high laboratory on an average day.
DEFAULT_LAB_CONDITIONS = AirConditions(24.0, 630.0 * TORR_TO_PA, 0.30, 400.0)


def _compressibility(T: float, p: float, xw: float) -> float:
    """Compressibility Z of moist air (T in K, p in Pa, xw mole fraction)."""
    t = T - 273.15
    a0, a1, a2 = 1.58123e-6, -2.9331e-8, 1.1043e-10
    b0, b1 = 5.707e-6, -2.051e-8
    c0, c1 = 1.9898e-4, -2.376e-6
    d, e = 1.83e-11, -0.765e-8
    return (1.0 - (p / T) * (a0 + a1 * t + a2 * t * t
                             + (b0 + b1 * t) * xw
                             + (c0 + c1 * t) * xw * xw)
            + (p / T) ** 2 * (d + e * xw * xw))


def ciddor_index(cond: AirConditions, wavelength):
    """Refractive index of air at vacuum ``wavelength`` [m].

    Vectorized over wavelength. Wavelengths outside 0.3 to 1.7 um raise
    a domain error; pressure 0 returns exactly 1.
    """
    lam = np.asarray(wavelength, dtype=float)
    if np.any(lam < 0.3e-6) or np.any(lam > 1.7e-6):
        raise DomainError(
            "wavelength outside dispersion-formula validity [0.3 um, 1.7 um]")
    if cond.pressure_pa == 0.0:
        out = np.ones_like(lam)
        return out if out.ndim else 1.0

    sigma2 = (1e-6 / lam) ** 2                      # um^-2
    t, p, h, xc = (cond.temperature_c, cond.pressure_pa,
                   cond.relative_humidity, cond.co2_ppm)
    T = t + 273.15

    if t >= 0.0:
        svp = math.exp(_SVP_A * T * T + _SVP_B * T + _SVP_C + _SVP_D / T)
    else:
        svp = 10.0 ** (-2663.5 / T + 12.537)        # over ice
    f_enh = _EF_ALPHA + _EF_BETA * p + _EF_GAMMA * t * t
    xw = f_enh * h * svp / p

    n_as = 1.0 + (_K1 / (_K0 - sigma2) + _K3 / (_K2 - sigma2)) * 1e-8
    n_axs = 1.0 + (n_as - 1.0) * (1.0 + 0.534e-6 * (xc - 450.0))
    n_ws = 1.0 + 1.022 * (_W0 + _W1 * sigma2 + _W2 * sigma2 ** 2
                          + _W3 * sigma2 ** 3) * 1e-8

    m_air = 1e-3 * (28.9635 + 12.011e-6 * (xc - 400.0))
    z_a = _compressibility(288.15, 101325.0, 0.0)
    z_w = _compressibility(293.15, 1333.0, 1.0)
    rho_axs = 101325.0 * m_air / (z_a * _GAS_CONSTANT * 288.15)
    rho_ws = 1333.0 * _M_WATER / (z_w * _GAS_CONSTANT * 293.15)

    z = _compressibility(T, p, xw)
    rho_a = p * m_air * (1.0 - xw) / (z * _GAS_CONSTANT * T)
    rho_w = p * _M_WATER * xw / (z * _GAS_CONSTANT * T)

    n = 1.0 + (rho_a / rho_axs) * (n_axs - 1.0) + (rho_w / rho_ws) * (n_ws - 1.0)
    return n if n.ndim else float(n)


def index_change(cond: AirConditions, band: tuple[float, float]) -> float:
    """n(lambda_min) - n(lambda_max) over a wavelength band [m].

    Positive in the visible/NIR where air is normally dispersive.
    """
    lam_min, lam_max = band
    if lam_min > lam_max:
        raise DomainError(f"band must satisfy min <= max, got {band}")
    return float(ciddor_index(cond, lam_min) - ciddor_index(cond, lam_max))
