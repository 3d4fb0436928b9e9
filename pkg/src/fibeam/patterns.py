"""Target beam patterns: analytic shapes and tabulated gain maps.

A pattern maps a far-field direction to a nonnegative real gain.  Angles
are radians: ``theta`` is elevation measured from broadside (the array
normal) and must lie in [0, pi/2]; ``phi`` is azimuth and is interpreted
modulo 2*pi.  Targets are magnitude-only (zero phase); a symmetric real
gain grid keeps the synthesized sensor weights real.

Threshold comparisons use "<=" throughout, so a direction exactly on a
boundary takes the inner value.
"""

from __future__ import annotations

import abc
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * np.pi


def _check_angles(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(theta < 0.0) or np.any(theta > np.pi / 2):
        raise ValueError("elevation theta must lie in [0, pi/2]")
    return theta, phi


def _scalar_if_0d(out):
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


class BeamPattern(abc.ABC):
    """Interface shared by all target patterns."""

    @abc.abstractmethod
    def gain(self, theta, phi):
        """Nonnegative target gain at direction(s) (theta, phi), broadcast."""

    @property
    @abc.abstractmethod
    def support_theta(self) -> float:
        """Largest elevation at which the pattern can be nonzero."""


@dataclass(frozen=True)
class ConePattern(BeamPattern):
    """Flat unit gain inside the elevation threshold, zero outside.

    Realized over frequency, this produces a constant-width conical
    mainlobe around broadside.
    """

    theta_c: float

    def __post_init__(self):
        if not 0.0 < self.theta_c < np.pi / 2:
            raise ValueError(f"theta_c must lie in (0, pi/2), got {self.theta_c}")

    def gain(self, theta, phi):
        theta, _ = _check_angles(theta, phi)
        return _scalar_if_0d(np.where(theta <= self.theta_c, 1.0, 0.0))

    @property
    def support_theta(self) -> float:
        return self.theta_c


@dataclass(frozen=True)
class TwoLevelPattern(BeamPattern):
    """Inner plateau gain, an annular shoulder at a reduced gain, zero beyond.

    The defaults give a 20 dB step between plateau and shoulder.
    """

    theta_c1: float
    theta_c2: float
    inner_gain: float = 1.0
    outer_gain: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.theta_c1 < self.theta_c2 < np.pi / 2:
            raise ValueError(
                "thresholds must satisfy 0 < theta_c1 < theta_c2 < pi/2, got "
                f"{self.theta_c1}, {self.theta_c2}"
            )
        if not 0.0 <= self.outer_gain <= self.inner_gain:
            raise ValueError(
                f"gains must satisfy 0 <= outer_gain <= inner_gain, got "
                f"inner={self.inner_gain}, outer={self.outer_gain}"
            )

    def gain(self, theta, phi):
        theta, _ = _check_angles(theta, phi)
        out = np.where(
            theta <= self.theta_c1,
            self.inner_gain,
            np.where(theta <= self.theta_c2, self.outer_gain, 0.0),
        )
        return _scalar_if_0d(out)

    @property
    def support_theta(self) -> float:
        return self.theta_c2 if self.outer_gain > 0 else self.theta_c1


@dataclass(frozen=True)
class SincPattern(BeamPattern):
    """|sin(alpha*pi*theta) / (alpha*pi*theta)| with gain 1 at broadside."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def gain(self, theta, phi):
        theta, _ = _check_angles(theta, phi)
        # np.sinc(x) = sin(pi x)/(pi x) with the removable singularity filled.
        return _scalar_if_0d(np.abs(np.sinc(self.alpha * theta)))

    @property
    def support_theta(self) -> float:
        return np.pi / 2


@dataclass(frozen=True, eq=False)
class TabulatedPattern(BeamPattern):
    """Arbitrary gain map sampled on a rectangular (theta, phi) grid.

    Parameters
    ----------
    theta_samples : 1-d float array
        Strictly ascending elevations in [0, pi/2], at least 2.
    phi_samples : 1-d float array
        Strictly ascending azimuths in [0, 2*pi), at least 2.
    gains : (len(theta), len(phi)) float array
        Finite, nonnegative gains.
    interpolation : str
        "bilinear" (default) or "nearest".  Azimuth wraps around; elevation
        queries outside the sampled range clamp to the end rows.
    source : str or None
        Path the table was loaded from, if any (metadata only).
    """

    theta_samples: np.ndarray
    phi_samples: np.ndarray
    gains: np.ndarray
    interpolation: str = "bilinear"
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        theta = np.asarray(self.theta_samples, dtype=float)
        phi = np.asarray(self.phi_samples, dtype=float)
        gains = np.asarray(self.gains, dtype=float)
        object.__setattr__(self, "theta_samples", theta)
        object.__setattr__(self, "phi_samples", phi)
        object.__setattr__(self, "gains", gains)
        if theta.ndim != 1 or len(theta) < 2:
            raise ValueError("theta_samples must be 1-d with at least 2 entries")
        if phi.ndim != 1 or len(phi) < 2:
            raise ValueError("phi_samples must be 1-d with at least 2 entries")
        if np.any(np.diff(theta) <= 0) or np.any(np.diff(phi) <= 0):
            raise ValueError("sample axes must be strictly ascending")
        if theta[0] < 0 or theta[-1] > np.pi / 2:
            raise ValueError("theta_samples must lie in [0, pi/2]")
        if phi[0] < 0 or phi[-1] >= TWO_PI:
            raise ValueError("phi_samples must lie in [0, 2*pi)")
        if gains.shape != (len(theta), len(phi)):
            raise ValueError(
                f"gains shape {gains.shape} does not match axes "
                f"({len(theta)}, {len(phi)})"
            )
        if not np.all(np.isfinite(gains)) or np.any(gains < 0):
            raise ValueError("gains must be finite and nonnegative")
        if self.interpolation not in ("bilinear", "nearest"):
            raise ValueError(
                f"interpolation must be 'bilinear' or 'nearest', got {self.interpolation!r}"
            )

    def gain(self, theta, phi):
        theta, phi = _check_angles(theta, phi)
        theta, phi = np.broadcast_arrays(theta, phi)
        # Wrap azimuth onto the extended axis [phi_0, phi_0 + 2*pi].
        phi = np.mod(phi, TWO_PI)
        phi_ext = np.append(self.phi_samples, self.phi_samples[0] + TWO_PI)
        gains_ext = np.concatenate([self.gains, self.gains[:, :1]], axis=1)
        phi = np.where(phi < phi_ext[0], phi + TWO_PI, phi)

        th = np.clip(theta, self.theta_samples[0], self.theta_samples[-1])
        ph = np.clip(phi, phi_ext[0], phi_ext[-1])
        it = np.clip(np.searchsorted(self.theta_samples, th, side="right") - 1, 0,
                     len(self.theta_samples) - 2)
        ip = np.clip(np.searchsorted(phi_ext, ph, side="right") - 1, 0, len(phi_ext) - 2)
        tt = (th - self.theta_samples[it]) / (self.theta_samples[it + 1] - self.theta_samples[it])
        tp = (ph - phi_ext[ip]) / (phi_ext[ip + 1] - phi_ext[ip])

        if self.interpolation == "nearest":
            it = it + (tt > 0.5)
            ip = ip + (tp > 0.5)
            return _scalar_if_0d(gains_ext[it, ip])

        g00 = gains_ext[it, ip]
        g01 = gains_ext[it, ip + 1]
        g10 = gains_ext[it + 1, ip]
        g11 = gains_ext[it + 1, ip + 1]
        out = (g00 * (1 - tt) * (1 - tp) + g01 * (1 - tt) * tp
               + g10 * tt * (1 - tp) + g11 * tt * tp)
        return _scalar_if_0d(out)

    @property
    def support_theta(self) -> float:
        nonzero_rows = np.nonzero(np.any(self.gains > 0, axis=1))[0]
        if len(nonzero_rows) == 0:
            return 0.0
        return float(self.theta_samples[nonzero_rows[-1]])


def load_tabulated_csv(path, interpolation: str = "bilinear") -> TabulatedPattern:
    """Load a tabulated pattern from CSV with header ``theta_deg,phi_deg,gain``.

    The rows must form a complete rectangular grid (every theta paired with
    every phi, each exactly once); angles are degrees in the file.
    """
    path = Path(path)
    cells = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"theta_deg", "phi_deg", "gain"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(
                f"{path}: expected CSV header with columns theta_deg,phi_deg,gain"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                t = float(row["theta_deg"])
                p = float(row["phi_deg"])
                g = float(row["gain"])
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric value") from exc
            if (t, p) in cells:
                raise ValueError(f"{path}:{lineno}: duplicate grid cell ({t}, {p})")
            cells[(t, p)] = g
    if not cells:
        raise ValueError(f"{path}: no data rows")
    thetas = sorted({t for t, _ in cells})
    phis = sorted({p for _, p in cells})
    if len(cells) != len(thetas) * len(phis):
        raise ValueError(
            f"{path}: incomplete grid ({len(cells)} cells, expected "
            f"{len(thetas)}x{len(phis)})"
        )
    gains = np.empty((len(thetas), len(phis)))
    for i, t in enumerate(thetas):
        for j, p in enumerate(phis):
            if (t, p) not in cells:
                raise ValueError(f"{path}: missing grid cell ({t}, {p})")
            gains[i, j] = cells[(t, p)]
    return TabulatedPattern(
        np.radians(thetas), np.radians(phis), gains,
        interpolation=interpolation, source=str(path),
    )


def pattern_to_items(pattern: BeamPattern) -> dict[str, str]:
    """Serialize a pattern to config-file key/value pairs (angles in degrees)."""
    if isinstance(pattern, ConePattern):
        return {"type": "cone", "theta_c_deg": repr(float(np.degrees(pattern.theta_c)))}
    if isinstance(pattern, TwoLevelPattern):
        return {
            "type": "two_level",
            "theta_c1_deg": repr(float(np.degrees(pattern.theta_c1))),
            "theta_c2_deg": repr(float(np.degrees(pattern.theta_c2))),
            "inner_gain": repr(float(pattern.inner_gain)),
            "outer_gain": repr(float(pattern.outer_gain)),
        }
    if isinstance(pattern, SincPattern):
        return {"type": "sinc", "alpha": repr(float(pattern.alpha))}
    if isinstance(pattern, TabulatedPattern):
        if pattern.source is None:
            raise ValueError("tabulated pattern has no source file to reference")
        return {
            "type": "tabulated",
            "file": pattern.source,
            "interpolation": pattern.interpolation,
        }
    raise TypeError(f"unknown pattern type {type(pattern).__name__}")


def pattern_from_items(items, base_dir=None) -> BeamPattern:
    """Inverse of :func:`pattern_to_items`.

    ``base_dir`` resolves a relative tabulated-pattern file path.
    """
    items = dict(items)
    kind = items.get("type", "").strip().lower()
    if kind == "cone":
        return ConePattern(theta_c=np.radians(float(items["theta_c_deg"])))
    if kind == "two_level":
        return TwoLevelPattern(
            theta_c1=np.radians(float(items["theta_c1_deg"])),
            theta_c2=np.radians(float(items["theta_c2_deg"])),
            inner_gain=float(items.get("inner_gain", 1.0)),
            outer_gain=float(items.get("outer_gain", 0.1)),
        )
    if kind == "sinc":
        return SincPattern(alpha=float(items["alpha"]))
    if kind == "tabulated":
        file_path = Path(items["file"])
        if base_dir is not None and not file_path.is_absolute():
            file_path = Path(base_dir) / file_path
        return load_tabulated_csv(file_path, items.get("interpolation", "bilinear"))
    raise ValueError(f"unknown pattern type {items.get('type')!r}")
