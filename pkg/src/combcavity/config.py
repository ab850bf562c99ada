"""Run configuration: flat INI sections mapped onto one frozen dataclass.

Sections and keys (all optional; unknown keys are rejected so typos
fail loudly):

    [comb]    f_rep_hz, f_o_hz, envelope_csv, envelope_flat_power,
              linewidth_hz
    [cavity]  coating_csv, synthetic_stack (bragg910|constant),
              constant_reflectivity, constant_phase_rad,
              domain_min_nm, domain_max_nm, mirror_radius_m
    [medium]  vacuum, temperature_c, pressure_pa, humidity, co2_ppm
    [lock]    center_nm, width_nm, m
    [run]     output_dir, seed

Command-line flags override file values; the effective configuration is
hashed (sha256 over canonical key=value lines) into every CSV header so
outputs are traceable to their inputs.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, fields, replace

from .air_index import AirConditions
from .comb_model import CombSpec, flat_envelope, load_envelope
from .constants import TORR_TO_PA
from .errors import DomainError
from .mirror_model import (CoatingModel, constant_coating, load_coating,
                           reference_bragg_coating)

_SCHEMA = {
    "comb": {
        "f_rep_hz": float, "f_o_hz": float, "envelope_csv": str,
        "envelope_flat_power": float, "linewidth_hz": float,
    },
    "cavity": {
        "coating_csv": str, "synthetic_stack": str,
        "constant_reflectivity": float, "constant_phase_rad": float,
        "domain_min_nm": float, "domain_max_nm": float,
        "mirror_radius_m": float,
    },
    "medium": {
        "vacuum": bool, "temperature_c": float, "pressure_pa": float,
        "humidity": float, "co2_ppm": float,
    },
    "lock": {"center_nm": float, "width_nm": float, "m": int},
    "run": {"output_dir": str, "seed": int},
}

_KEY_TO_FIELD = {
    ("comb", "f_rep_hz"): "f_rep_hz",
    ("comb", "f_o_hz"): "f_o_hz",
    ("comb", "envelope_csv"): "envelope_csv",
    ("comb", "envelope_flat_power"): "envelope_flat_power",
    ("comb", "linewidth_hz"): "linewidth_hz",
    ("cavity", "coating_csv"): "coating_csv",
    ("cavity", "synthetic_stack"): "synthetic_stack",
    ("cavity", "constant_reflectivity"): "constant_reflectivity",
    ("cavity", "constant_phase_rad"): "constant_phase_rad",
    ("cavity", "domain_min_nm"): "domain_min_nm",
    ("cavity", "domain_max_nm"): "domain_max_nm",
    ("cavity", "mirror_radius_m"): "mirror_radius_m",
    ("medium", "vacuum"): "vacuum",
    ("medium", "temperature_c"): "temperature_c",
    ("medium", "pressure_pa"): "pressure_pa",
    ("medium", "humidity"): "humidity",
    ("medium", "co2_ppm"): "co2_ppm",
    ("lock", "center_nm"): "lock_center_nm",
    ("lock", "width_nm"): "lock_width_nm",
    ("lock", "m"): "m_filter",
    ("run", "output_dir"): "output_dir",
    ("run", "seed"): "seed",
}


@dataclass(frozen=True)
class RunConfig:
    """Effective configuration of one CLI run (defaults + file + flags)."""

    f_rep_hz: float = 1e9
    f_o_hz: float = 0.0
    envelope_csv: str = ""
    envelope_flat_power: float = 1.0
    linewidth_hz: float = 0.0
    coating_csv: str = ""
    synthetic_stack: str = "bragg910"
    constant_reflectivity: float = 0.992
    constant_phase_rad: float = 0.0
    domain_min_nm: float = 700.0
    domain_max_nm: float = 1150.0
    mirror_radius_m: float = 0.5
    vacuum: bool = True
    temperature_c: float = 24.0
    pressure_pa: float = 630.0 * TORR_TO_PA
    humidity: float = 0.30
    co2_ppm: float = 400.0
    lock_center_nm: float = 910.0
    lock_width_nm: float = 10.0
    m_filter: int = 20
    output_dir: str = "out"
    seed: int = 20260814

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise DomainError(f"config file not found: {path}")
        values = {}
        for section in parser.sections():
            if section not in _SCHEMA:
                raise DomainError(f"{path}: unknown config section [{section}]")
            for key in parser[section]:
                if key not in _SCHEMA[section]:
                    raise DomainError(
                        f"{path}: unknown key '{key}' in section [{section}]")
                kind = _SCHEMA[section][key]
                try:
                    if kind is bool:
                        val = parser.getboolean(section, key)
                    elif kind is int:
                        val = parser.getint(section, key)
                    elif kind is float:
                        val = parser.getfloat(section, key)
                    else:
                        val = parser.get(section, key)
                except ValueError as exc:
                    raise DomainError(
                        f"{path}: bad value for {section}.{key}") from exc
                values[_KEY_TO_FIELD[(section, key)]] = val
        return replace(cls(), **values)

    def canonical_items(self) -> list[tuple[str, str]]:
        """(name, repr) pairs of every result-affecting field, sorted.

        output_dir is excluded: where a run writes does not change what
        it computes, and the hash should match across directories.
        """
        return [(f.name, repr(getattr(self, f.name)))
                for f in sorted(fields(self), key=lambda f: f.name)
                if f.name != "output_dir"]

    def config_hash(self) -> str:
        blob = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(blob.encode()).hexdigest()

    # --- builders -------------------------------------------------------

    def build_coating(self) -> CoatingModel:
        if self.coating_csv:
            return load_coating(self.coating_csv)
        if self.synthetic_stack == "bragg910":
            return reference_bragg_coating()
        if self.synthetic_stack == "constant":
            return constant_coating(self.constant_reflectivity,
                                    self.constant_phase_rad,
                                    self.domain_min_nm * 1e-9,
                                    self.domain_max_nm * 1e-9)
        raise DomainError(
            f"unknown synthetic_stack '{self.synthetic_stack}' "
            "(choices: bragg910, constant)")

    def build_medium(self):
        if self.vacuum:
            return None
        return AirConditions(self.temperature_c, self.pressure_pa,
                             self.humidity, self.co2_ppm)

    def build_comb(self, coating: CoatingModel) -> CombSpec:
        if self.envelope_csv:
            env_f, env_p = load_envelope(self.envelope_csv)
        else:
            f_lo, f_hi = coating.frequency_domain
            env_f, env_p = flat_envelope(f_lo, f_hi, self.envelope_flat_power)
        return CombSpec.from_envelope(self.f_rep_hz, self.f_o_hz,
                                      env_f, env_p, self.linewidth_hz)

    def build_lock(self):
        from .cavity import LockConfig
        return LockConfig(self.lock_center_nm * 1e-9,
                          self.lock_width_nm * 1e-9, self.m_filter)
