"""Transfer function of the default 910 nm Bragg cavity.

Locks the cavity to a 1 GHz comb at m = 20, writes the per-tooth
transfer of the passed class, and reports the usable 50 % bandwidth
and the nearest-neighbor suppression at the lock point.
"""

import argparse
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from combcavity.cavity import CavitySpec, nominal_length
from combcavity.config import RunConfig
from combcavity.constants import SPEED_OF_LIGHT
from combcavity.filter_analysis import (filter_comb, heterodyne_suppression,
                                        usable_bandwidth)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/transfer_scan.csv")
    args = ap.parse_args()

    cfg = RunConfig()
    coating = cfg.build_coating()
    medium = cfg.build_medium()
    comb = cfg.build_comb(coating)
    lock = cfg.build_lock()
    length = nominal_length(cfg.f_rep_hz, cfg.m_filter, medium, coating,
                            lock.filter_center, mirror_radius=cfg.mirror_radius_m)
    cavity = CavitySpec(length, coating, mirror_radius=cfg.mirror_radius_m,
                        medium=medium)
    spectrum = filter_comb(comb, cavity, lock)

    mask = spectrum.passed_mask
    freq = spectrum.frequencies[mask]
    trans = spectrum.transfer[mask]
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write("wavelength_nm,transfer\n")
        for f, t in zip(freq, trans):
            fh.write(f"{SPEED_OF_LIGHT / f * 1e9!r},{float(t)!r}\n")

    band = usable_bandwidth(spectrum)
    nnl, nnr = heterodyne_suppression(spectrum,
                                      SPEED_OF_LIGHT / lock.filter_center)
    print(f"wrote {out} ({freq.size} passed teeth)")
    print(f"locked length: {spectrum.locked_length:.9e} m")
    if band is None:
        print("usable band: none (lock tooth below threshold)")
    else:
        print(f"usable band: {band[0] * 1e9:.2f}-{band[1] * 1e9:.2f} nm "
              f"({(band[1] - band[0]) * 1e9:.2f} nm wide)")
    print(f"nearest-neighbor suppression at lock: {nnl:.2f} / {nnr:.2f} dB")


if __name__ == "__main__":
    main()
