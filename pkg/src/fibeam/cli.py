"""Command-line interface: ``validate``, ``synthesize``, ``evaluate``, ``simulate``.

Job configuration is an INI-style text file with named sections; angles in
config files and CSV headers are degrees (the library itself works in
radians).  Exit codes: 0 success, 1 validation failure, 2 I/O failure,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import sys
import traceback
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._io import atomic_write_text, fmt
from ._version import __version__
from .arraygeom import ArrayConfig, radius_for_frequency, spacing_bounds, strict_band
from .directivity import (
    cross_cut,
    directivity,
    directivity_points,
    metrics,
    write_cross_cut_csv,
    write_directivity_csv,
    write_metrics_csv,
)
from .patterns import pattern_from_items
from .spectral import Taper
from .synthesis import load_weight_bank, save_weight_bank, synthesize
from .uvgrid import deformation_report
from .wavesim import PlaneWaveSource, beamform, sensor_snapshot

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_INTERNAL = 3

#: Per-source gate for measured-vs-predicted gain in ``simulate``.
SIMULATE_TOLERANCE = 1e-6

EMIT_CHOICES = ("weights", "maps", "cuts", "metrics")


class ConfigError(Exception):
    """Invalid job configuration or invocation, with per-field diagnostics."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InputFileError(Exception):
    """An input file exists but cannot be used (corrupt or inconsistent)."""


def _load_bank(args):
    try:
        return load_weight_bank(args.weights, args.meta)
    except ValueError as exc:
        raise InputFileError(f"cannot load weight bank: {exc}") from exc


@dataclass(frozen=True)
class BandRequest:
    f_min_hz: float
    f_max_hz: float
    count: int
    spacing: str  # linear | log
    mode: str  # strict | relaxed

    def frequencies(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.f_min_hz, self.f_max_hz, self.count)
        return np.linspace(self.f_min_hz, self.f_max_hz, self.count)


@dataclass
class JobConfig:
    array: ArrayConfig
    pattern: object
    band: BandRequest
    taper: Taper
    out_dir: Path
    emit: tuple


def _get(parser, section, key, problems, convert=float, default=None, required=True):
    if not parser.has_option(section, key):
        if required and default is None:
            problems.append(f"{section}.{key}: missing required key")
            return None
        return default
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except (TypeError, ValueError):
        problems.append(f"{section}.{key}: cannot parse {raw!r}")
        return None


def parse_job_config(path, taper_override: Taper | None = None) -> JobConfig:
    """Parse and validate a job configuration file."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    problems: list[str] = []
    for section in ("array", "pattern", "band"):
        if not parser.has_section(section):
            problems.append(f"{section}: missing required section")
    if problems:
        raise ConfigError(problems)

    n = _get(parser, "array", "n", problems, convert=int)
    spacing = _get(parser, "array", "spacing_m", problems)
    c = _get(parser, "array", "sound_speed_m_s", problems, default=343.0, required=False)
    array = None
    if None not in (n, spacing, c):
        try:
            array = ArrayConfig(n, spacing, c)
        except ValueError as exc:
            problems.append(f"array: {exc}")

    pattern = None
    try:
        pattern = pattern_from_items(dict(parser.items("pattern")), base_dir=path.parent)
    except FileNotFoundError as exc:
        problems.append(f"pattern.file: {exc}")
    except (KeyError, ValueError) as exc:
        problems.append(f"pattern: {exc}")

    f_min = _get(parser, "band", "f_min_hz", problems)
    f_max = _get(parser, "band", "f_max_hz", problems)
    count = _get(parser, "band", "count", problems, convert=int)
    spacing_kind = _get(parser, "band", "spacing", problems, convert=str,
                        default="linear", required=False)
    mode = _get(parser, "band", "mode", problems, convert=str,
                default="strict", required=False)
    band = None
    if None not in (f_min, f_max, count, spacing_kind, mode):
        spacing_kind = spacing_kind.strip().lower()
        mode = mode.strip().lower()
        if not 0 < f_min <= f_max:
            problems.append(f"band: need 0 < f_min_hz <= f_max_hz, got {f_min}, {f_max}")
        if count < 1:
            problems.append(f"band.count: must be >= 1, got {count}")
        if spacing_kind not in ("linear", "log"):
            problems.append(f"band.spacing: must be linear or log, got {spacing_kind!r}")
        if mode not in ("strict", "relaxed"):
            problems.append(f"band.mode: must be strict or relaxed, got {mode!r}")
        if not problems:
            band = BandRequest(f_min, f_max, count, spacing_kind, mode)

    taper = taper_override
    if taper is None:
        taper_text = "none"
        if parser.has_option("synthesis", "taper"):
            taper_text = parser.get("synthesis", "taper")
        try:
            taper = Taper.parse(taper_text)
        except ValueError as exc:
            problems.append(f"synthesis.taper: {exc}")

    out_dir = Path("out")
    if parser.has_option("output", "directory"):
        out_dir = Path(parser.get("output", "directory"))
        if not out_dir.is_absolute():
            out_dir = path.parent / out_dir
    emit = EMIT_CHOICES
    if parser.has_option("output", "emit"):
        emit = tuple(tok.strip() for tok in parser.get("output", "emit").split(",") if tok.strip())
        unknown = [tok for tok in emit if tok not in EMIT_CHOICES]
        if unknown:
            problems.append(f"output.emit: unknown outputs {unknown}; choose from {EMIT_CHOICES}")

    if problems:
        raise ConfigError(problems)
    return JobConfig(array, pattern, band, taper, out_dir, emit)


# ---------------------------------------------------------------------------
# band assessment shared by validate and synthesize


@dataclass
class BandAssessment:
    strict: object
    relaxed: object
    frequencies: np.ndarray
    reports: list
    hard_problems: list[str]
    band_problems: list[str]


def assess_band(job: JobConfig) -> BandAssessment:
    sband = strict_band(job.array)
    freqs = job.band.frequencies()
    reports = [deformation_report(job.array, job.pattern, f) for f in freqs]
    relaxed = reports[0].relaxed_band

    hard, soft = [], []
    for f, rep in zip(freqs, reports):
        if rep.radius < 1.0 - 1e-12:
            hard.append(
                f"f {fmt(f)} Hz: below representable band, R = {rep.radius:.6g} < 1 "
                f"(minimum {fmt(sband.f_min_hz)} Hz)"
            )
            continue
        if job.band.mode == "strict" and not sband.contains(f):
            soft.append(
                f"f {fmt(f)} Hz: outside strict band "
                f"[{fmt(sband.f_min_hz)}, {fmt(sband.f_max_hz)}] Hz"
            )
        elif job.band.mode == "relaxed" and relaxed is not None and not relaxed.contains(f):
            soft.append(
                f"f {fmt(f)} Hz: outside relaxed band "
                f"[{fmt(relaxed.f_min_hz)}, {fmt(relaxed.f_max_hz)}] Hz"
            )
    return BandAssessment(sband, relaxed, freqs, reports, hard, soft)


def _flags(report) -> str:
    parts = []
    if report.clipped:
        parts.append("clipped")
    if report.under_resolved:
        parts.append("under-resolved")
    return "+".join(parts) if parts else "ok"


def _print_validation(job: JobConfig, a: BandAssessment, out=sys.stdout):
    cfg = job.array
    print(f"array: N={cfg.n_per_axis}, spacing {cfg.spacing_m:g} m, "
          f"c {cfg.sound_speed_m_s:g} m/s", file=out)
    print(f"pattern: {job.pattern}", file=out)
    print(f"strict band: {a.strict.f_min_hz:.6g} Hz .. {a.strict.f_max_hz:.6g} Hz", file=out)
    if a.relaxed is not None:
        print(f"relaxed band (pattern support): {a.relaxed.f_min_hz:.6g} Hz .. "
              f"{a.relaxed.f_max_hz:.6g} Hz", file=out)
    for f_edge in (a.strict.f_min_hz, a.strict.f_max_hz):
        lam = cfg.sound_speed_m_s / f_edge
        lo, hi = spacing_bounds(cfg, lam)
        print(f"spacing bounds at {f_edge:.6g} Hz (lambda {lam:.6g} m): "
              f"{lo:.6g} m .. {hi:.6g} m", file=out)
    print(f"requested: {job.band.count} frequencies, {job.band.spacing} spacing, "
          f"mode {job.band.mode}, taper {job.taper}", file=out)
    print(f"  {'f (Hz)':>12}  {'R':>10}  {'support':>10}  flags", file=out)
    for f, rep in zip(a.frequencies, a.reports):
        print(f"  {f:>12.6g}  {rep.radius:>10.4f}  {rep.support_radius:>10.4f}  "
              f"{_flags(rep)}", file=out)


def _write_validation_report(job: JobConfig, a: BandAssessment, valid: bool, path: Path):
    report = configparser.ConfigParser(interpolation=None)
    report["tool"] = {"name": "fibeam", "version": __version__}
    report["array"] = {
        "n_per_axis": str(job.array.n_per_axis),
        "spacing_m": repr(job.array.spacing_m),
        "sound_speed_m_s": repr(job.array.sound_speed_m_s),
    }
    report["strict_band"] = {
        "f_min_hz": repr(a.strict.f_min_hz),
        "f_max_hz": repr(a.strict.f_max_hz),
    }
    if a.relaxed is not None:
        report["relaxed_band"] = {
            "f_min_hz": repr(a.relaxed.f_min_hz),
            "f_max_hz": repr(a.relaxed.f_max_hz),
        }
    lam_min = job.array.sound_speed_m_s / a.strict.f_max_hz
    lo, hi = spacing_bounds(job.array, lam_min)
    report["spacing_bounds_at_f_max"] = {
        "wavelength_m": repr(lam_min),
        "lower_m": repr(lo),
        "upper_m": repr(hi),
    }
    report["frequencies"] = {
        "values_hz": ", ".join(repr(float(f)) for f in a.frequencies),
        "radii": ", ".join(repr(float(r.radius)) for r in a.reports),
        "support_radii": ", ".join(repr(float(r.support_radius)) for r in a.reports),
        "deformed": ", ".join(str(int(r.deformed)) for r in a.reports),
    }
    report["result"] = {
        "valid": str(int(valid)),
        "problems": str(len(a.hard_problems) + len(a.band_problems)),
    }
    buf = io.StringIO()
    report.write(buf)
    atomic_write_text(path, buf.getvalue())


def cmd_validate(args) -> int:
    taper = Taper.parse(args.taper) if args.taper else None
    job = parse_job_config(args.config, taper_override=taper)
    a = assess_band(job)
    _print_validation(job, a)

    problems = a.hard_problems + ([] if args.allow_clipping else a.band_problems)
    if args.allow_clipping and a.band_problems:
        for p in a.band_problems:
            print(f"warning: {p}")
    valid = not problems

    out_dir = Path(args.out) if args.out else job.out_dir
    report_path = out_dir / "validation_report.cfg"
    _write_validation_report(job, a, valid, report_path)
    print(f"report: {report_path}")

    if not valid:
        print(f"INVALID ({len(problems)} problem(s)):")
        for p in problems:
            print(f"  - {p}")
        return EXIT_INVALID
    print("VALID")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    taper = Taper.parse(args.taper) if args.taper else None
    job = parse_job_config(args.config, taper_override=taper)
    a = assess_band(job)

    problems = list(a.hard_problems)
    if not args.allow_clipping:
        problems += a.band_problems
    if problems:
        print(f"validation failed ({len(problems)} problem(s)); "
              f"use --allow-clipping to synthesize outside the band anyway:")
        for p in problems:
            print(f"  - {p}")
        return EXIT_INVALID
    for p in a.band_problems:
        print(f"warning: {p}")

    bank = synthesize(job.array, job.pattern, a.frequencies, taper=job.taper)
    out_dir = Path(args.out) if args.out else job.out_dir
    csv_path, meta_path = save_weight_bank(bank, out_dir / "weights.csv")
    print(f"wrote {csv_path}")
    print(f"wrote {meta_path}")
    for entry in bank.entries:
        note = " (deformed)" if entry.deformed else ""
        print(f"  f {fmt(entry.f_hz)} Hz: R {entry.radius:.4f}{note}")
    return EXIT_OK


def _parse_grid(text: str):
    try:
        n_theta, n_phi = (int(tok) for tok in text.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"--grid: expected THETAxPHI counts, got {text!r}") from exc
    if n_theta < 2 or n_phi < 2:
        raise ConfigError(f"--grid: need at least 2 samples per axis, got {text!r}")
    theta = np.radians(np.linspace(0.0, 90.0, n_theta))
    phi = np.radians(np.linspace(0.0, 360.0, n_phi))
    return theta, phi


def _parse_cut(text: str):
    try:
        a, b = (float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--cut: expected two azimuths in degrees, got {text!r}") from exc
    return np.radians(a), np.radians(b)


def cmd_evaluate(args) -> int:
    bank = _load_bank(args)
    if bank.pattern is None:
        raise ConfigError(
            "weight bank metadata carries no pattern section; metrics need the target"
        )
    theta, phi = _parse_grid(args.grid)
    phi_pair = _parse_cut(args.cut)
    emit = tuple(tok.strip() for tok in args.emit.split(",") if tok.strip())
    unknown = [tok for tok in emit if tok not in EMIT_CHOICES]
    if unknown:
        raise ConfigError(f"--emit: unknown outputs {unknown}")
    out_dir = Path(args.out) if args.out else Path(args.weights).parent

    all_metrics = []
    for i, entry in enumerate(bank.entries):
        dmap = directivity(bank.cfg, entry, theta, phi)
        stem = f"{i:02d}_{entry.f_hz:.0f}Hz"
        if "maps" in emit:
            print(f"wrote {write_directivity_csv(dmap, out_dir / f'map_{stem}.csv')}")
        if "cuts" in emit:
            cut = cross_cut(dmap, phi_pair)
            print(f"wrote {write_cross_cut_csv(cut, out_dir / f'cut_{stem}.csv')}")
        all_metrics.append(metrics(dmap, bank.pattern))
    if "metrics" in emit:
        print(f"wrote {write_metrics_csv(all_metrics, out_dir / 'metrics.csv')}")

    print(f"  {'f (Hz)':>12}  {'edge (deg)':>10}  {'sidelobe (dB)':>13}  "
          f"{'rms':>10}  {'level (dB)':>10}")
    for m in all_metrics:
        edge = f"{np.degrees(m.mainlobe_edge_theta):.2f}" if m.mainlobe_edge_theta is not None else "-"
        sll = f"{m.peak_sidelobe_db:.2f}" if m.peak_sidelobe_db is not None else "-"
        lvl = f"{m.level_ratio_db:.2f}" if m.level_ratio_db is not None else "-"
        print(f"  {m.f_hz:>12.6g}  {edge:>10}  {sll:>13}  {m.target_rms_error:>10.3e}  {lvl:>10}")
    return EXIT_OK


def _load_sources(path) -> list[dict]:
    path = Path(path)
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"theta_deg", "phi_deg"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ConfigError(f"{path}: expected CSV header with theta_deg,phi_deg")
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append(
                    {
                        "theta": np.radians(float(row["theta_deg"])),
                        "phi": np.radians(float(row["phi_deg"])),
                        "f_hz": float(row["f_hz"]) if row.get("f_hz") else None,
                        "amplitude": float(row.get("amplitude") or 1.0),
                        "phase": np.radians(float(row.get("phase_deg") or 0.0)),
                    }
                )
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{path}: no sources")
    return rows


def _random_sources(count: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    return [
        {
            "theta": float(t),
            "phi": float(p),
            "f_hz": None,
            "amplitude": 1.0,
            "phase": 0.0,
        }
        for t, p in zip(
            rng.uniform(0.0, np.pi / 2, count), rng.uniform(0.0, 2 * np.pi, count)
        )
    ]


def cmd_simulate(args) -> int:
    bank = _load_bank(args)
    sources = _load_sources(args.sources) if args.sources else _random_sources(args.random, args.seed)

    lines = ["f_hz,theta_deg,phi_deg,measured,predicted,rel_error"]
    print(f"  {'f (Hz)':>12}  {'theta':>8}  {'phi':>8}  {'measured':>12}  "
          f"{'predicted':>12}  {'rel err':>10}")
    worst = 0.0
    bad_sources = []
    for s in sources:
        freqs = [s["f_hz"]] if s["f_hz"] is not None else [e.f_hz for e in bank.entries]
        for f in freqs:
            try:
                entry = bank.entry_at(f)
            except KeyError as exc:
                raise ConfigError(str(exc)) from exc
            try:
                src = PlaneWaveSource(s["theta"], s["phi"], f, s["amplitude"], s["phase"])
            except ValueError as exc:
                bad_sources.append(str(exc))
                continue
            measured = abs(beamform(entry, sensor_snapshot(bank.cfg, src)))
            predicted = src.amplitude * abs(
                directivity_points(bank.cfg, entry, [src.theta], [src.phi])[0]
            )
            scale = max(predicted, 1e-12 * float(np.sum(np.abs(entry.weights))))
            rel = abs(measured - predicted) / scale if scale > 0 else 0.0
            worst = max(worst, rel)
            print(f"  {f:>12.6g}  {np.degrees(src.theta):>8.3f}  "
                  f"{np.degrees(src.phi):>8.3f}  {measured:>12.6e}  "
                  f"{predicted:>12.6e}  {rel:>10.3e}")
            lines.append(
                ",".join(
                    [
                        fmt(f),
                        fmt(np.degrees(src.theta)),
                        fmt(np.degrees(src.phi)),
                        fmt(measured),
                        fmt(predicted),
                        fmt(rel),
                    ]
                )
            )
    if args.out:
        path = atomic_write_text(Path(args.out) / "simulation.csv", "\n".join(lines) + "\n")
        print(f"wrote {path}")
    if bad_sources:
        print(f"rejected {len(bad_sources)} source(s):")
        for msg in bad_sources:
            print(f"  - {msg}")
        return EXIT_INVALID
    print(f"max relative error: {worst:.3e}")
    if worst > SIMULATE_TOLERANCE:
        print(f"FAIL: exceeds tolerance {SIMULATE_TOLERANCE:g}")
        return EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibeam",
        description="Broadband beamforming weight synthesis for uniform planar arrays.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a job config against the array's bands")
    p_val.add_argument("--config", required=True, help="job configuration file")
    p_val.add_argument("--out", help="directory for the machine-readable report")
    p_val.add_argument("--allow-clipping", action="store_true",
                       help="demote out-of-band frequencies to warnings")
    p_val.add_argument("--taper", help="override taper: none|tukey|tukey:FRAC")
    p_val.set_defaults(func=cmd_validate)

    p_syn = sub.add_parser("synthesize", help="compute per-frequency sensor weights")
    p_syn.add_argument("--config", required=True, help="job configuration file")
    p_syn.add_argument("--out", help="output directory (default from config)")
    p_syn.add_argument("--allow-clipping", action="store_true",
                       help="synthesize even when frequencies fall outside the band")
    p_syn.add_argument("--taper", help="override taper: none|tukey|tukey:FRAC")
    p_syn.set_defaults(func=cmd_synthesize)

    p_eval = sub.add_parser("evaluate", help="realized directivity maps,ized cuts and metrics")
    p_eval.add_argument("weights", help="weight bank CSV")
    p_eval.add_argument("--meta", help="metadata sidecar (default: next to the CSV)")
    p_eval.add_argument("--out", help="output directory (default: next to the CSV)")
    p_eval.add_argument("--grid", default="181x361", help="theta x phi sample counts")
    p_eval.add_argument("--cut", default="0,180", help="cross-cut azimuth pair in degrees")
    p_eval.add_argument("--emit", default="maps,cuts,metrics", help="which CSVs to write")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sim = sub.add_parser("simulate", help="plane-wave check: beamformed gain vs prediction")
    p_sim.add_argument("weights", help="weight bank CSV")
    p_sim.add_argument("--meta", help="metadata sidecar (default: next to the CSV)")
    p_sim.add_argument("--sources", help="source list CSV (theta_deg,phi_deg[,f_hz,amplitude,phase_deg])")
    p_sim.add_argument("--random", type=int, default=100, metavar="COUNT",
                       help="number of random directions when no source list is given")
    p_sim.add_argument("--seed", type=int, default=0, help="seed for random directions")
    p_sim.add_argument("--out", help="directory for the comparison CSV")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print("configuration error:", file=sys.stderr)
        for p in exc.problems:
            print(f"  - {p}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, InputFileError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception:
        print("internal error:", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
