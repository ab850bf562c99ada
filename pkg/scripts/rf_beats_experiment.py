"""RF beat spectrum of the filtered comb inside its usable band.

Compares the cumulative beat power at every harmonic of f_rep for the
unfiltered comb (all beats equal) against the filtered comb, where
beats at non-multiples of m f_rep are suppressed by the cavity.
"""

import argparse
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from combcavity.cavity import CavitySpec, nominal_length
from combcavity.config import RunConfig
from combcavity.constants import SPEED_OF_LIGHT
from combcavity.filter_analysis import (filter_comb, rf_beat_spectrum,
                                        usable_bandwidth)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-harmonic", type=int, default=45)
    ap.add_argument("--out", default="out/rf_beats.csv")
    args = ap.parse_args()

    cfg = RunConfig()
    coating = cfg.build_coating()
    comb = cfg.build_comb(coating)
    lock = cfg.build_lock()
    length = nominal_length(cfg.f_rep_hz, cfg.m_filter, None, coating,
                            lock.filter_center, mirror_radius=cfg.mirror_radius_m)
    cavity = CavitySpec(length, coating, mirror_radius=cfg.mirror_radius_m)
    spectrum = filter_comb(comb, cavity, lock)

    interval = usable_bandwidth(spectrum)
    band = (SPEED_OF_LIGHT / interval[1], SPEED_OF_LIGHT / interval[0])
    beats = rf_beat_spectrum(spectrum, args.max_harmonic, band=band)

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write("harmonic,beat_hz,beat_power_norm,beat_db\n")
        for j, p in beats:
            db = "" if p <= 0.0 else repr(10.0 * np.log10(p))
            fh.write(f"{j},{j * cfg.f_rep_hz!r},{p!r},{db}\n")

    worst = max(p for j, p in beats if j % cfg.m_filter != 0)
    print(f"wrote {out}")
    print(f"usable band: {interval[0] * 1e9:.1f}-{interval[1] * 1e9:.1f} nm")
    print(f"worst suppressed beat: {10.0 * np.log10(worst):.2f} dB "
          f"relative to the m f_rep beat")


if __name__ == "__main__":
    main()
