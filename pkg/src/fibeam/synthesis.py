"""End-to-end weight synthesis: pattern + array + frequencies -> weight bank.

Each frequency is handled independently: the target is sampled onto the
(u, v) lattice, optionally tapered, and inverted with the centered 2D IDFT.
With no taper the forward transform of the weights reproduces the sampled
grid exactly, which is the defining contract of this module.
"""

from __future__ import annotations

import configparser
import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._io import atomic_write_text, fmt
from ._version import __version__
from .arraygeom import ArrayConfig, radius_for_frequency
from .patterns import BeamPattern, pattern_from_items, pattern_to_items
from .spectral import NO_TAPER, Taper, apply_taper, centered_idft2
from .uvgrid import deformation_report, sample_uv_grid


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Complex sensor weights for one frequency, centered index layout.

    ``weights[i, j]`` drives the sensor at index (n1, n2) with n1, n2 over
    the centered range along axes 0 and 1.
    """

    f_hz: float
    weights: np.ndarray
    taper: Taper = NO_TAPER
    radius: float = float("nan")
    deformed: bool = False

    @property
    def n_per_axis(self) -> int:
        return self.weights.shape[0]


@dataclass(eq=False)
class WeightBank:
    """Per-frequency weight matrices for one array and target pattern."""

    cfg: ArrayConfig
    pattern: BeamPattern | None
    taper: Taper
    entries: list[WeightMatrix] = field(default_factory=list)

    def __post_init__(self):
        freqs = [e.f_hz for e in self.entries]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("weight bank frequencies must be strictly ascending")
        sizes = {e.weights.shape for e in self.entries}
        if len(sizes) > 1:
            raise ValueError(f"weight matrices disagree in size: {sorted(sizes)}")
        if self.entries and self.entries[0].weights.shape[0] != self.cfg.n_per_axis:
            raise ValueError("weight matrix size does not match the array config")

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([e.f_hz for e in self.entries])

    def entry_at(self, f_hz: float, rtol: float = 1e-9) -> WeightMatrix:
        for e in self.entries:
            if abs(e.f_hz - f_hz) <= rtol * max(abs(f_hz), 1.0):
                return e
        raise KeyError(f"no weights stored for frequency {f_hz} Hz")


def synthesize(
    cfg: ArrayConfig,
    pattern: BeamPattern,
    freqs_hz,
    taper: Taper = NO_TAPER,
) -> WeightBank:
    """Synthesize sensor weights for each requested frequency.

    Frequencies must be strictly ascending and all inside the representable
    range (visible-region radius R >= 1).  A pattern support circle that
    spills over the lattice, or that shrinks below the first ring, marks
    the entry as deformed but does not fail the synthesis.
    """
    freqs = [float(f) for f in np.atleast_1d(np.asarray(freqs_hz, dtype=float))]
    if not freqs:
        raise ValueError("no frequencies requested")
    if any(b <= a for a, b in zip(freqs, freqs[1:])):
        raise ValueError("frequencies must be strictly ascending")
    bad = [f for f in freqs if not f > 0 or radius_for_frequency(cfg, f) < 1.0 - 1e-12]
    if bad:
        raise ValueError(
            f"frequencies below the representable band (R < 1): {bad}; "
            f"minimum is {cfg.sound_speed_m_s / (cfg.n_per_axis * cfg.spacing_m):.6g} Hz"
        )

    entries = []
    for f in freqs:
        grid = apply_taper(sample_uv_grid(cfg, pattern, f), taper)
        report = deformation_report(cfg, pattern, f)
        entries.append(
            WeightMatrix(
                f_hz=f,
                weights=centered_idft2(grid.values),
                taper=taper,
                radius=grid.radius,
                deformed=report.deformed,
            )
        )
    return WeightBank(cfg=cfg, pattern=pattern, taper=taper, entries=entries)


# ---------------------------------------------------------------------------
# Persistence: CSV weight table plus a structured-text metadata sidecar.

WEIGHTS_CSV_HEADER = "f_hz,n1,n2,re,im"


def default_meta_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".meta")


def save_weight_bank(bank: WeightBank, csv_path, meta_path=None) -> tuple[Path, Path]:
    """Write a weight bank as CSV plus metadata sidecar, atomically.

    CSV columns are ``f_hz,n1,n2,re,im`` sorted by (f_hz, n1, n2) with 12
    significant digits; rewriting the same bank is byte-identical.
    """
    csv_path = Path(csv_path)
    meta_path = default_meta_path(csv_path) if meta_path is None else Path(meta_path)

    idx = bank.cfg.axis_indices()
    lines = [WEIGHTS_CSV_HEADER]
    for entry in bank.entries:
        f_str = fmt(entry.f_hz)
        w = entry.weights
        for i, n1 in enumerate(idx):
            for j, n2 in enumerate(idx):
                lines.append(f"{f_str},{n1},{n2},{fmt(w[i, j].real)},{fmt(w[i, j].imag)}")
    atomic_write_text(csv_path, "\n".join(lines) + "\n")

    meta = configparser.ConfigParser(interpolation=None)
    meta["tool"] = {"name": "fibeam", "version": __version__}
    meta["array"] = {
        "n_per_axis": str(bank.cfg.n_per_axis),
        "spacing_m": repr(bank.cfg.spacing_m),
        "sound_speed_m_s": repr(bank.cfg.sound_speed_m_s),
    }
    if bank.pattern is not None:
        meta["pattern"] = pattern_to_items(bank.pattern)
    meta["synthesis"] = {"taper": str(bank.taper)}
    meta["band"] = {
        "frequencies_hz": ", ".join(repr(e.f_hz) for e in bank.entries),
        "deformed": ", ".join(str(int(e.deformed)) for e in bank.entries),
    }
    buf = io.StringIO()
    meta.write(buf)
    atomic_write_text(meta_path, buf.getvalue())
    return csv_path, meta_path


def load_weight_bank(csv_path, meta_path=None) -> WeightBank:
    """Read a weight bank written by :func:`save_weight_bank`."""
    csv_path = Path(csv_path)
    meta_path = default_meta_path(csv_path) if meta_path is None else Path(meta_path)

    meta = configparser.ConfigParser(interpolation=None)
    read = meta.read(meta_path, encoding="utf-8")
    if not read:
        raise FileNotFoundError(f"metadata sidecar not found: {meta_path}")
    try:
        cfg = ArrayConfig(
            n_per_axis=int(meta["array"]["n_per_axis"]),
            spacing_m=float(meta["array"]["spacing_m"]),
            sound_speed_m_s=float(meta["array"]["sound_speed_m_s"]),
        )
        taper = Taper.parse(meta["synthesis"]["taper"])
        freqs = [float(tok) for tok in meta["band"]["frequencies_hz"].split(",")]
        flags = [bool(int(tok)) for tok in meta["band"]["deformed"].split(",")]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{meta_path}: malformed metadata: {exc}") from exc
    if len(flags) != len(freqs):
        raise ValueError(f"{meta_path}: deformed flags do not match frequencies")

    pattern = None
    if meta.has_section("pattern"):
        pattern = pattern_from_items(meta["pattern"], base_dir=meta_path.parent)

    n = cfg.n_per_axis
    offset = n // 2
    matrices = {f: np.zeros((n, n), dtype=complex) for f in freqs}
    seen = {f: 0 for f in freqs}
    with csv_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != WEIGHTS_CSV_HEADER.split(","):
            raise ValueError(f"{csv_path}: unexpected header {header}")
        for lineno, row in enumerate(reader, start=2):
            try:
                f, n1, n2 = float(row[0]), int(row[1]), int(row[2])
                value = complex(float(row[3]), float(row[4]))
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{csv_path}:{lineno}: malformed row") from exc
            if f not in matrices:
                raise ValueError(f"{csv_path}:{lineno}: frequency {f} not in metadata")
            i, j = n1 + offset, n2 + offset
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"{csv_path}:{lineno}: index ({n1}, {n2}) out of range")
            matrices[f][i, j] = value
            seen[f] += 1
    for f, count in seen.items():
        if count != n * n:
            raise ValueError(f"{csv_path}: frequency {f} has {count} rows, expected {n * n}")

    entries = [
        WeightMatrix(
            f_hz=f,
            weights=matrices[f],
            taper=taper,
            radius=radius_for_frequency(cfg, f),
            deformed=flag,
        )
        for f, flag in zip(freqs, flags)
    ]
    return WeightBank(cfg=cfg, pattern=pattern, taper=taper, entries=entries)
