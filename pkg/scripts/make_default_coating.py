"""Regenerate data/coating_bragg910.csv from the reference Bragg design.

The CSV mirrors reference_bragg_coating() so that runs configured with
coating_csv = data/coating_bragg910.csv reproduce the synthetic-stack
default bit for bit after the round trip through the file format.
"""

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from combcavity.mirror_model import reference_bragg_design, stack_reflection

OUT = pathlib.Path(__file__).resolve().parents[1] / "data" / "coating_bragg910.csv"


def main() -> None:
    lam = np.linspace(700e-9, 1150e-9, 1801)
    refl, phase = stack_reflection(reference_bragg_design(), lam)
    refl = np.minimum(refl, 1.0 - 1e-9)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w") as fh:
        fh.write("# 910 nm quarter-wave Bragg stack, 7 pairs, peak R = 0.992\n")
        fh.write("# regenerate with: python scripts/make_default_coating.py\n")
        fh.write("wavelength_nm,reflectivity,phase_rad\n")
        for w, r, p in zip(lam, refl, phase):
            fh.write(f"{float(w) * 1e9!r},{float(r)!r},{float(p)!r}\n")
    print(f"wrote {OUT} ({lam.size} samples)")


if __name__ == "__main__":
    main()
