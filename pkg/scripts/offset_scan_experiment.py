"""Locked length and center transmission across one offset period.

Sweeps the cavity-comb offset over [0, f_rep], re-locking at every
point with the servo pinned to one tooth class. The locked length
traces a sawtooth: linear drift within the period and a single snap
back where the offset folds.
"""

import argparse
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from combcavity.cavity import CavitySpec, nominal_length
from combcavity.config import RunConfig
from combcavity.filter_analysis import offset_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--out", default="out/offset_scan.csv")
    args = ap.parse_args()

    cfg = RunConfig()
    coating = cfg.build_coating()
    comb = cfg.build_comb(coating)
    lock = cfg.build_lock()
    length = nominal_length(cfg.f_rep_hz, cfg.m_filter, None, coating,
                            lock.filter_center, mirror_radius=cfg.mirror_radius_m)
    cavity = CavitySpec(length, coating, mirror_radius=cfg.mirror_radius_m)

    grid = np.linspace(0.0, cfg.f_rep_hz, args.points)
    points = offset_scan(comb, cavity, lock, grid)

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write("delta_nu_cc_hz,locked_length_m,center_transmission,"
                 "bandwidth_nm\n")
        for p in points:
            bw = "" if p.bandwidth is None else repr(p.bandwidth * 1e9)
            fh.write(f"{p.delta_nu_cc!r},{p.locked_length!r},"
                     f"{p.center_transmission!r},{bw}\n")

    lengths = np.array([p.locked_length for p in points])
    trans = np.array([p.center_transmission for p in points])
    jumps = np.abs(np.diff(lengths))
    threshold = lock.filter_center / (4.0 * cfg.m_filter)
    print(f"wrote {out} ({len(points)} lock points)")
    print(f"length span: {np.ptp(lengths) * 1e9:.2f} nm, "
          f"discontinuities: {int(np.sum(jumps > threshold))}")
    print(f"center transmission: min {trans.min():.6f}, max {trans.max():.6f}")
    print(f"endpoint match: |L(f_rep) - L(0)| = "
          f"{abs(lengths[-1] - lengths[0]):.3e} m")


if __name__ == "__main__":
    main()
