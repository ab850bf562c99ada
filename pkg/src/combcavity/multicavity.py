"""Parallel filter-cavity banks for wide spectral coverage.

One cavity filters one band; adjacent bands overlap so that the passed
teeth of neighboring cavities produce a low-frequency beat note in the
overlap, which references one cavity to the next. Tooth classes are
selected per cavity by an integer offset o_i: cavity i passes the comb
indices congruent to o_i modulo the common filter number m (realized by
a slight length change via the congruence-restricted lock).

The merged output clips overlapping bands at their midpoints so each
spectral region is covered exactly once; beat analysis always sees the
full overlap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import CavitySpec, LockConfig, nominal_length
from .comb_model import CombSpec
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, NumericError
from .filter_analysis import FilteredSpectrum, filter_comb


@dataclass(frozen=True)
class BankEntry:
    """One cavity of the bank: band, optics, tooth class, lock, weight."""

    band: tuple  # (wavelength_min m, wavelength_max m)
    coating: object
    m_filter: int
    tooth_offset: int
    lock: LockConfig
    weight: float = 1.0
    medium: object = None
    mirror_radius: float = 0.5

    def __post_init__(self):
        lo, hi = self.band
        if not 0.0 < lo < hi:
            raise DomainError(f"band must satisfy 0 < min < max, got {self.band}")
        object.__setattr__(self, "band", (float(lo), float(hi)))
        if self.m_filter < 2:
            raise DomainError(f"m_filter must be >= 2, got {self.m_filter}")
        if not 0 <= self.tooth_offset < self.m_filter:
            raise DomainError(
                f"tooth_offset must be in [0, {self.m_filter}), got "
                f"{self.tooth_offset}")
        if not 0.0 <= self.weight <= 1.0:
            raise DomainError(f"weight must be in [0, 1], got {self.weight}")
        if not lo <= self.lock.filter_center <= hi:
            raise DomainError("lock center must lie inside the band")


@dataclass(frozen=True)
class CavityBankPlan:
    """Ordered bank entries; adjacent bands must overlap, m must be common."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise DomainError("bank plan needs at least one entry")
        m = entries[0].m_filter
        for e in entries:
            if e.m_filter != m:
                raise DomainError("all bank entries must share one m_filter")
        for a, b in zip(entries, entries[1:]):
            if not a.band[0] < b.band[0]:
                raise DomainError("bank bands must be ordered by wavelength")
            if not b.band[0] < a.band[1]:
                raise DomainError(
                    f"adjacent bands {a.band} and {b.band} do not overlap")


@dataclass(frozen=True)
class CavityResult:
    """Lock outcome of one bank entry."""

    entry: BankEntry
    locked_length: float
    spectrum: FilteredSpectrum


@dataclass(frozen=True, eq=False)
class BankResult:
    """Per-cavity results plus the midpoint-clipped weighted merge."""

    cavities: tuple
    merged_indices: np.ndarray
    merged_frequencies: np.ndarray
    merged_amplitudes: np.ndarray


def _clipped_band(plan: CavityBankPlan, i: int) -> tuple[float, float]:
    """Entry i's band with each overlap cut at its midpoint."""
    lo, hi = plan.entries[i].band
    if i > 0:
        prev_hi = plan.entries[i - 1].band[1]
        if prev_hi > lo:
            lo = 0.5 * (lo + prev_hi)
    if i < len(plan.entries) - 1:
        next_lo = plan.entries[i + 1].band[0]
        if next_lo < hi:
            hi = 0.5 * (next_lo + hi)
    return lo, hi


def plan_bank(comb: CombSpec, plan: CavityBankPlan) -> BankResult:
    """Lock every cavity of the bank onto its tooth class and merge.

    Each cavity starts from the length matching its local FSR to
    m * f_rep and is then locked with the objective restricted to comb
    indices congruent to its tooth offset. Merged output: passed teeth
    inside the midpoint-clipped band, powers scaled by the entry weight.
    """
    cavities = []
    for entry in plan.entries:
        try:
            length = nominal_length(comb.f_rep, entry.m_filter, entry.medium,
                                    entry.coating, entry.lock.filter_center,
                                    mirror_radius=entry.mirror_radius)
            cavity = CavitySpec(length, entry.coating,
                                mirror_radius=entry.mirror_radius,
                                medium=entry.medium)
            spectrum = filter_comb(comb, cavity, entry.lock,
                                   tooth_offset=entry.tooth_offset)
        except (DomainError, NumericError) as exc:
            lo, hi = entry.band
            raise type(exc)(
                f"band [{lo * 1e9:.1f}, {hi * 1e9:.1f}] nm: {exc}") from exc
        cavities.append(CavityResult(entry, spectrum.locked_length, spectrum))

    idx_parts, freq_parts, amp_parts = [], [], []
    for i, res in enumerate(cavities):
        lam_lo, lam_hi = _clipped_band(plan, i)
        spec = res.spectrum
        keep = spec.passed_mask \
            & (spec.frequencies >= SPEED_OF_LIGHT / lam_hi) \
            & (spec.frequencies <= SPEED_OF_LIGHT / lam_lo)
        idx_parts.append(spec.indices[keep])
        freq_parts.append(spec.frequencies[keep])
        amp_parts.append(spec.amplitudes[keep]
                         * np.sqrt(res.entry.weight))
    idx = np.concatenate(idx_parts)
    freq = np.concatenate(freq_parts)
    amp = np.concatenate(amp_parts)
    order = np.argsort(freq)
    return BankResult(tuple(cavities), idx[order], freq[order], amp[order])


def overlap_beats(result: BankResult, pair: tuple[int, int]):
    """Distinct beat frequencies between two cavities' passed teeth in
    their band overlap, sorted ascending [Hz].

    Every value is an exact integer multiple of f_rep (the passed teeth
    of the two congruence classes differ by integer numbers of comb
    spacings). Zero appears when both cavities pass a common tooth.
    """
    i, j = pair
    res_a, res_b = result.cavities[i], result.cavities[j]
    lam_lo = max(res_a.entry.band[0], res_b.entry.band[0])
    lam_hi = min(res_a.entry.band[1], res_b.entry.band[1])
    if not lam_lo < lam_hi:
        raise DomainError(f"bands of cavities {i} and {j} do not overlap")
    f_lo, f_hi = SPEED_OF_LIGHT / lam_hi, SPEED_OF_LIGHT / lam_lo

    def passed_in_overlap(res):
        spec = res.spectrum
        keep = spec.passed_mask & (spec.frequencies >= f_lo) \
            & (spec.frequencies <= f_hi)
        return spec.indices[keep]
    na = passed_in_overlap(res_a)
    nb = passed_in_overlap(res_b)
    if na.size == 0 or nb.size == 0:
        raise DomainError(
            f"no passed mode of cavities {i} and {j} inside the overlap")
    f_rep = res_a.spectrum.f_rep
    diffs = np.unique(np.abs(na[:, None] - nb[None, :]))
    return [float(d) * f_rep for d in diffs]
