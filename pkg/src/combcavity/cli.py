"""Command-line front end: every analysis as a subcommand with CSV output.

Layout of every output file: `#`-prefixed header comments carrying the
subcommand name, the sha256 hash of the effective configuration, and
(unless --no-timestamp) a generation timestamp; then one header row of
column names; then the data rows. Bodies are byte-identical across
re-runs with the same configuration and seed.

Exit codes: 0 success, 1 validation/input error, 2 numeric failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import datetime
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .air_index import AirConditions, ciddor_index, index_change
from .calibration import (SpectrographModel, fit_constrained, fit_per_line,
                          render_ccd, rv_equivalent)
from .cavity import CavitySpec, LockConfig, find_resonance, nominal_length
from .comb_model import flat_envelope, load_envelope, CombSpec
from .config import RunConfig
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, NumericError
from .filter_analysis import (cog_shift, filter_comb, offset_scan,
                              rf_beat_spectrum, suppression_closed_form,
                              suppression_scan, transmit_comb,
                              usable_bandwidth)
from .mirror_model import constant_coating, load_coating, reference_bragg_coating
from .multicavity import BankEntry, CavityBankPlan, overlap_beats, plan_bank

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems with exit code 64.

    Flag abbreviation is disabled so scripts cannot silently change
    meaning when a new flag shares a prefix with an old one.
    """

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, subcommand: str, cfg: RunConfig, columns, rows,
               args) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# combcavity {subcommand}\n")
        fh.write(f"# config_hash: sha256:{cfg.config_hash()}\n")
        if not args.no_timestamp:
            stamp = datetime.datetime.now(datetime.timezone.utc)
            fh.write(f"# generated: {stamp.isoformat(timespec='seconds')}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    print(f"wrote {path}")
    if args.gnuplot:
        _write_gnuplot(path, subcommand, columns)


_PLOT_AXES = {
    "filter-spectrum": (3, 6),
    "offset-scan": (1, 3),
    "suppression-scan": (1, 2),
    "rf-spectrum": (1, 3),
    "cog-shift": (1, 2),
    "render-ccd": (1, 2),
    "multicavity-plan": (3, 4),
}


def _write_gnuplot(csv_path: Path, subcommand: str, columns) -> None:
    if subcommand not in _PLOT_AXES:
        return
    xc, yc = _PLOT_AXES[subcommand]
    gp = csv_path.with_suffix(".gp")
    with open(gp, "w") as fh:
        fh.write("set datafile separator ','\n")
        fh.write(f"set xlabel '{columns[xc - 1]}'\n")
        fh.write(f"set ylabel '{columns[yc - 1]}'\n")
        fh.write("set key off\n")
        fh.write(f"plot '{csv_path.name}' every ::1 using {xc}:{yc} "
                 "with linespoints pt 7 ps 0.4\n")
    print(f"wrote {gp}")


def _merge_config(args) -> RunConfig:
    path = args.config or os.environ.get("COMBCAVITY_CONFIG")
    cfg = RunConfig.from_file(path) if path else RunConfig()
    overrides = {}
    for field_name, flag_attr in _CONFIG_FLAGS:
        val = getattr(args, flag_attr, None)
        if val is not None:
            overrides[field_name] = val
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


_CONFIG_FLAGS = [
    ("f_rep_hz", "f_rep_hz"),
    ("f_o_hz", "f_o_hz"),
    ("envelope_csv", "envelope_csv"),
    ("envelope_flat_power", "envelope_flat_power"),
    ("linewidth_hz", "linewidth_hz"),
    ("coating_csv", "coating_csv"),
    ("synthetic_stack", "synthetic_stack"),
    ("constant_reflectivity", "constant_reflectivity"),
    ("constant_phase_rad", "constant_phase_rad"),
    ("domain_min_nm", "domain_min_nm"),
    ("domain_max_nm", "domain_max_nm"),
    ("mirror_radius_m", "mirror_radius_m"),
    ("vacuum", "vacuum"),
    ("temperature_c", "temperature_c"),
    ("pressure_pa", "pressure_pa"),
    ("humidity", "humidity"),
    ("co2_ppm", "co2_ppm"),
    ("lock_center_nm", "lock_center_nm"),
    ("lock_width_nm", "lock_width_nm"),
    ("m_filter", "m_filter"),
    ("output_dir", "output_dir"),
    ("seed", "seed"),
]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("configuration overrides")
    g.add_argument("--config", help="INI config file (or $COMBCAVITY_CONFIG)")
    g.add_argument("--f-rep-hz", dest="f_rep_hz", type=float)
    g.add_argument("--f-o-hz", dest="f_o_hz", type=float)
    g.add_argument("--envelope-csv", dest="envelope_csv")
    g.add_argument("--envelope-flat-power", dest="envelope_flat_power",
                   type=float)
    g.add_argument("--linewidth-hz", dest="linewidth_hz", type=float)
    g.add_argument("--coating-csv", dest="coating_csv")
    g.add_argument("--synthetic-stack", dest="synthetic_stack",
                   choices=["bragg910", "constant"])
    g.add_argument("--constant-reflectivity", dest="constant_reflectivity",
                   type=float)
    g.add_argument("--constant-phase-rad", dest="constant_phase_rad",
                   type=float)
    g.add_argument("--domain-min-nm", dest="domain_min_nm", type=float)
    g.add_argument("--domain-max-nm", dest="domain_max_nm", type=float)
    g.add_argument("--mirror-radius-m", dest="mirror_radius_m", type=float)
    g.add_argument("--vacuum", dest="vacuum", action="store_true",
                   default=None)
    g.add_argument("--air", dest="vacuum", action="store_false")
    g.add_argument("--temperature-c", dest="temperature_c", type=float)
    g.add_argument("--pressure-pa", dest="pressure_pa", type=float)
    g.add_argument("--humidity", dest="humidity", type=float)
    g.add_argument("--co2-ppm", dest="co2_ppm", type=float)
    g.add_argument("--lock-center-nm", dest="lock_center_nm", type=float)
    g.add_argument("--lock-width-nm", dest="lock_width_nm", type=float)
    g.add_argument("--m", dest="m_filter", type=int)
    g.add_argument("--output-dir", dest="output_dir")
    g.add_argument("--seed", dest="seed", type=int)
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp header comment")
    parser.add_argument("--gnuplot", action="store_true",
                        help="also emit a gnuplot script per CSV")


def _pipeline(cfg: RunConfig):
    coating = cfg.build_coating()
    medium = cfg.build_medium()
    comb = cfg.build_comb(coating)
    lock = cfg.build_lock()
    length = nominal_length(cfg.f_rep_hz, cfg.m_filter, medium, coating,
                            lock.filter_center,
                            mirror_radius=cfg.mirror_radius_m)
    cavity = CavitySpec(length, coating, mirror_radius=cfg.mirror_radius_m,
                        medium=medium)
    return comb, cavity, lock


def _out(cfg: RunConfig, name: str) -> Path:
    return Path(cfg.output_dir) / name


# --- subcommand handlers --------------------------------------------------

def _cmd_ciddor(cfg: RunConfig, args) -> int:
    if args.wavelength_nm <= 0.0:
        raise DomainError(
            f"wavelength must be positive, got {args.wavelength_nm} nm")
    lam = args.wavelength_nm * 1e-9
    if cfg.vacuum:
        n = 1.0
    else:
        cond = AirConditions(cfg.temperature_c, cfg.pressure_pa,
                             cfg.humidity, cfg.co2_ppm)
        n = float(ciddor_index(cond, lam))
    print(f"n({args.wavelength_nm:g} nm) = {n:.12f}")
    return EXIT_OK


def _cmd_filter_spectrum(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    spectrum = filter_comb(comb, cavity, lock)
    trans = spectrum.transfer
    passed = spectrum.passed_mask
    rows = [(int(n), f, SPEED_OF_LIGHT / f * 1e9, p,
             abs(a) ** 2, t, bool(pm))
            for n, f, p, a, t, pm in zip(
                spectrum.indices, spectrum.frequencies,
                spectrum.input_powers, spectrum.amplitudes, trans, passed)]
    _write_csv(_out(cfg, "filter_spectrum.csv"), "filter-spectrum", cfg,
               ["index", "frequency_hz", "wavelength_nm", "input_power",
                "transmitted_power", "transfer", "passed"], rows, args)
    band = usable_bandwidth(spectrum)
    print(f"locked length: {spectrum.locked_length:.12e} m")
    if band:
        print(f"usable bandwidth: {(band[1] - band[0]) * 1e9:.2f} nm "
              f"({band[0] * 1e9:.1f} to {band[1] * 1e9:.1f} nm)")
    return EXIT_OK


def _cmd_offset_scan(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    grid = np.linspace(0.0, cfg.f_rep_hz, args.points)
    points = offset_scan(comb, cavity, lock, grid)
    rows = [(p.delta_nu_cc, p.locked_length, p.center_transmission,
             p.bandwidth * 1e9 if p.bandwidth is not None else None)
            for p in points]
    _write_csv(_out(cfg, "offset_scan.csv"), "offset-scan", cfg,
               ["delta_nu_cc_hz", "locked_length_m", "center_transmission",
                "bandwidth_nm"], rows, args)
    return EXIT_OK


def _cmd_suppression_scan(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    lo = args.scan_min_nm or cfg.lock_center_nm - 40.0
    hi = args.scan_max_nm or cfg.lock_center_nm + 40.0
    centers = np.linspace(lo, hi, args.points) * 1e-9
    records = suppression_scan(comb, cavity, lock, centers)
    rows = [(r.lock_wavelength * 1e9, r.nnl_db, r.nnr_db,
             r.passed_transmission) for r in records]
    _write_csv(_out(cfg, "suppression_scan.csv"), "suppression-scan", cfg,
               ["lock_nm", "nnl_db", "nnr_db", "passed_transmission"],
               rows, args)
    return EXIT_OK


def _cmd_rf_spectrum(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    spectrum = filter_comb(comb, cavity, lock)
    max_h = args.max_harmonic or 3 * cfg.m_filter
    interval = usable_bandwidth(spectrum)
    band = None
    if interval is not None:
        lam_lo, lam_hi = interval
        band = (SPEED_OF_LIGHT / lam_hi, SPEED_OF_LIGHT / lam_lo)
    beats = rf_beat_spectrum(spectrum, max_h, band=band)
    rows = [(j, j * cfg.f_rep_hz, p,
             10.0 * math.log10(p) if p > 0.0 else None)
            for j, p in beats]
    _write_csv(_out(cfg, "rf_spectrum.csv"), "rf-spectrum", cfg,
               ["harmonic", "beat_hz", "beat_power_norm", "beat_db"],
               rows, args)
    return EXIT_OK


def _cmd_cog_shift(cfg: RunConfig, args) -> int:
    m = cfg.m_filter
    lam = cfg.lock_center_nm * 1e-9
    if args.reflectivity is not None:
        coating = constant_coating(args.reflectivity, 0.0,
                                   lam - 60e-9, lam + 60e-9)
        length = SPEED_OF_LIGHT / (2.0 * m * cfg.f_rep_hz)
        cavity = CavitySpec(length, coating,
                            mirror_radius=cfg.mirror_radius_m,
                            geometric_phase=0.0)
        R = args.reflectivity
    else:
        _, cavity, lock = _pipeline(cfg)
        R = float(cavity.coating.reflectivity_at(SPEED_OF_LIGHT / lam))
    f_mode = find_resonance(cavity, SPEED_OF_LIGHT / lam)
    dcc_max = args.dcc_max_hz or 0.03 * cfg.f_rep_hz
    grid = np.linspace(-dcc_max, dcc_max, args.points)
    rows = []
    for dcc in grid:
        shift = cog_shift(cfg.linewidth_hz, cavity, f_mode, float(dcc))
        worst_nn = max(
            suppression_closed_form(R, m, +1, float(dcc), cfg.f_rep_hz),
            suppression_closed_form(R, m, -1, float(dcc), cfg.f_rep_hz))
        rows.append((float(dcc), shift, worst_nn,
                     rv_equivalent(shift, f_mode)))
    _write_csv(_out(cfg, "cog_shift.csv"), "cog-shift", cfg,
               ["delta_nu_cc_hz", "cog_shift_hz", "worst_nn_db",
                "rv_m_per_s"], rows, args)
    return EXIT_OK


def _cmd_bandwidth(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    spectrum = filter_comb(comb, cavity, lock)
    band = usable_bandwidth(spectrum, threshold=args.threshold)
    rows = []
    if band is None:
        rows.append(("full_scan_nm", None))
    else:
        rows.append(("full_scan_nm", (band[1] - band[0]) * 1e9))
    delta_n = args.delta_n
    if delta_n is None and not cfg.vacuum:
        cond = cfg.build_medium()
        lam_lo, lam_hi = cavity.coating.wavelength_domain
        delta_n = abs(index_change(cond, (lam_lo, lam_hi))) / 2.0
    if delta_n:
        lam = cfg.lock_center_nm * 1e-9
        R = float(cavity.coating.reflectivity_at(SPEED_OF_LIGHT / lam))
        from .filter_analysis import bandwidth_closed_form
        rows.append(("closed_form_nm",
                     bandwidth_closed_form(cfg.m_filter, lam, cfg.f_rep_hz,
                                           R, delta_n) * 1e9))
    _write_csv(_out(cfg, "bandwidth.csv"), "bandwidth", cfg,
               ["quantity", "value"], rows, args)
    for q, v in rows:
        print(f"{q}: {v if v is not None else 'n/a'}")
    return EXIT_OK


def _cmd_multicavity_plan(cfg: RunConfig, args) -> int:
    import configparser
    parser = configparser.ConfigParser()
    if not parser.read(args.plan):
        raise DomainError(f"plan file not found: {args.plan}")
    entries = []
    medium = cfg.build_medium()
    for section in parser.sections():
        sec = parser[section]
        try:
            lo_nm, hi_nm = (float(v) for v in sec["band_nm"].split(","))
            m = int(sec["m"])
            offset = int(sec["offset"])
            center = float(sec["lock_center_nm"]) * 1e-9
            width = float(sec["lock_width_nm"]) * 1e-9
            weight = float(sec.get("weight", "1.0"))
        except (KeyError, ValueError) as exc:
            raise DomainError(f"{args.plan}: bad section [{section}]: {exc}")
        coating_csv = sec.get("coating_csv", "")
        coating = load_coating(coating_csv) if coating_csv \
            else reference_bragg_coating()
        entries.append(BankEntry((lo_nm * 1e-9, hi_nm * 1e-9), coating, m,
                                 offset, LockConfig(center, width, m),
                                 weight=weight, medium=medium,
                                 mirror_radius=cfg.mirror_radius_m))
    plan = CavityBankPlan(tuple(entries))

    if cfg.envelope_csv:
        env_f, env_p = load_envelope(cfg.envelope_csv)
    else:
        f_lo = min(e.coating.frequency_domain[0] for e in entries)
        f_hi = max(e.coating.frequency_domain[1] for e in entries)
        env_f, env_p = flat_envelope(f_lo, f_hi, cfg.envelope_flat_power)
    comb = CombSpec.from_envelope(cfg.f_rep_hz, cfg.f_o_hz, env_f, env_p,
                                  cfg.linewidth_hz)
    result = plan_bank(comb, plan)
    rows = [(int(n), f, SPEED_OF_LIGHT / f * 1e9, abs(a) ** 2)
            for n, f, a in zip(result.merged_indices,
                               result.merged_frequencies,
                               result.merged_amplitudes)]
    _write_csv(_out(cfg, "multicavity_merged.csv"), "multicavity-plan", cfg,
               ["index", "frequency_hz", "wavelength_nm", "power"],
               rows, args)
    beat_rows = []
    for i in range(len(entries) - 1):
        for beat in overlap_beats(result, (i, i + 1)):
            beat_rows.append((i, i + 1, beat, int(round(beat / cfg.f_rep_hz))))
    _write_csv(_out(cfg, "multicavity_beats.csv"), "multicavity-beats", cfg,
               ["cavity_a", "cavity_b", "beat_hz", "harmonic"],
               beat_rows, args)
    for res in result.cavities:
        lo, hi = res.entry.band
        print(f"band {lo * 1e9:.0f}-{hi * 1e9:.0f} nm: "
              f"L* = {res.locked_length:.9e} m, offset {res.entry.tooth_offset}")
    return EXIT_OK


def _detector(args, cfg: RunConfig, spectrum, n_lines: int) -> SpectrographModel:
    # margin < spacing/2 so exactly n_lines passed teeth land on-frame
    spacing_px = args.line_spacing_px
    dispersion = args.dispersion_hz or cfg.m_filter * cfg.f_rep_hz / spacing_px
    margin = (spacing_px - 1) // 2
    pixels = args.pixels or spacing_px * (n_lines - 1) + 2 * margin + 1
    if args.ref_frequency_hz:
        ref = args.ref_frequency_hz
    else:
        anchor_pos = int(np.searchsorted(spectrum.indices,
                                         spectrum.anchor_index))
        f_anchor = float(spectrum.frequencies[anchor_pos])
        f_first = f_anchor - ((n_lines - 1) // 2) * cfg.m_filter * cfg.f_rep_hz
        ref = f_first - margin * dispersion
    return SpectrographModel(pixels=pixels, dispersion=dispersion,
                             psf_sigma=args.psf_sigma_px,
                             reference_frequency=ref,
                             photon_noise=args.photon_noise,
                             read_noise_sigma=args.read_noise,
                             exposure_scale=args.exposure_scale)


def _cmd_render_ccd(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    spectrum = filter_comb(comb, cavity, lock)
    model = _detector(args, cfg, spectrum, args.n_lines)
    frame = render_ccd(spectrum, model, cfg.seed)
    rows = list(enumerate(frame))
    _write_csv(_out(cfg, "ccd_frame.csv"), "render-ccd", cfg,
               ["pixel", "counts"], rows, args)
    return EXIT_OK


def _cmd_calib_fit(cfg: RunConfig, args) -> int:
    comb, cavity, lock = _pipeline(cfg)
    spectrum = filter_comb(comb, cavity, lock)
    model = _detector(args, cfg, spectrum, args.n_lines)
    frame = render_ccd(spectrum, model, cfg.seed)
    weights = None
    if args.photon_noise:
        sigma = np.sqrt(np.clip(frame, 0.0, None) + args.read_noise ** 2)
        weights = 1.0 / np.maximum(sigma, 1.0)
    fit = fit_constrained(frame, args.n_lines, weights=weights)
    per_line = fit_per_line(frame, args.n_lines)
    sig = fit.uncertainties
    f_center = model.reference_frequency \
        + 0.5 * model.pixels * model.dispersion
    rv = rv_equivalent(fit.d * model.dispersion, f_center)
    rows = [
        ("a_counts", fit.a, sig[0]),
        ("b_px", fit.b, sig[1]),
        ("c_inv_px2", fit.c, sig[2]),
        ("d_px", fit.d, sig[3]),
        ("e_counts", fit.e, sig[4]),
        ("residual_rms", fit.residual_rms, None),
        ("reduced_chi2", fit.reduced_chi2, None),
        ("rv_of_d_m_per_s", rv, None),
    ]
    _write_csv(_out(cfg, "calib_fit.csv"), "calib-fit", cfg,
               ["parameter", "value", "uncertainty"], rows, args)
    line_rows = [(i, a, s, p, o, bool(bl)) for i, (a, s, p, o, bl)
                 in enumerate(zip(per_line.amplitudes, per_line.sigmas,
                                  per_line.positions, per_line.offsets,
                                  per_line.blended))]
    _write_csv(_out(cfg, "calib_fit_lines.csv"), "calib-fit-lines", cfg,
               ["line", "amplitude", "sigma_px", "position_px", "offset",
                "blended"], line_rows, args)
    print(f"d = {fit.d:.6f} px ({rv:.6e} m/s equivalent), "
          f"reduced chi2 = {fit.reduced_chi2:.3f}")
    return EXIT_OK


# --- entry point ----------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="combcavity",
                     description="Fabry-Perot comb-filter analysis toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                parser_class=_Parser)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_config_flags(p)
        p.set_defaults(handler=handler)
        return p

    add("filter-spectrum", _cmd_filter_spectrum,
        "lock the cavity and write the per-mode transmitted spectrum")

    p = add("offset-scan", _cmd_offset_scan,
            "re-lock across one period of cavity-comb offsets")
    p.add_argument("--points", type=int, default=21)

    p = add("suppression-scan", _cmd_suppression_scan,
            "nearest-neighbor suppression versus lock wavelength")
    p.add_argument("--scan-min-nm", type=float)
    p.add_argument("--scan-max-nm", type=float)
    p.add_argument("--points", type=int, default=17)

    p = add("rf-spectrum", _cmd_rf_spectrum,
            "cumulative beat powers at harmonics of f_rep")
    p.add_argument("--max-harmonic", type=int)

    p = add("cog-shift", _cmd_cog_shift,
            "center-of-gravity line shift versus cavity-comb offset")
    p.add_argument("--R", dest="reflectivity", type=float,
                   help="use a frequency-flat mirror of this reflectivity")
    p.add_argument("--dcc-max-hz", type=float)
    p.add_argument("--points", type=int, default=25)

    p = add("bandwidth", _cmd_bandwidth,
            "usable filter bandwidth: full scan and closed form")
    p.add_argument("--delta-n", type=float,
                   help="center-to-edge index change for the closed form")
    p.add_argument("--threshold", type=float, default=0.5)

    p = add("multicavity-plan", _cmd_multicavity_plan,
            "lock a bank of cavities and merge their outputs")
    p.add_argument("--plan", required=True, help="bank plan INI file")

    def add_ccd(p):
        p.add_argument("--n-lines", type=int, default=9)
        p.add_argument("--pixels", type=int)
        p.add_argument("--dispersion-hz", type=float)
        p.add_argument("--line-spacing-px", type=int, default=15)
        p.add_argument("--psf-sigma-px", type=float, default=1.7)
        p.add_argument("--ref-frequency-hz", type=float)
        p.add_argument("--photon-noise", action="store_true")
        p.add_argument("--read-noise", type=float, default=3.0)
        p.add_argument("--exposure-scale", type=float, default=2e5)

    p = add("render-ccd", _cmd_render_ccd,
            "render the filtered comb onto a synthetic detector")
    add_ccd(p)

    p = add("calib-fit", _cmd_calib_fit,
            "render, then fit constrained and per-line calibration models")
    add_ccd(p)

    p = add("ciddor", _cmd_ciddor,
            "refractive index of the configured medium")
    p.add_argument("--wavelength-nm", type=float, required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        return args.handler(cfg, args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
