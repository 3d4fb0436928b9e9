"""Uniform planar array geometry and working-frequency limits.

The array is square (N x N) with identical spacing on both axes.  Sensor
indices are integers centered on the coordinate origin: for odd N they run
-(N-1)/2 .. (N-1)/2, for even N the origin still coincides with a sensor
and the indices run -N/2 .. N/2-1 (the positive half-axis is one sensor
short).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SOUND_SPEED_AIR_M_S = 343.0
"""Speed of sound in dry air at 20 C, m/s."""


@dataclass(frozen=True)
class ArrayConfig:
    """Square N x N sensor array with uniform spacing.

    Parameters
    ----------
    n_per_axis : int
        Sensor count N along each axis, at least 3.
    spacing_m : float
        Inter-sensor distance in meters (same on both axes).
    sound_speed_m_s : float
        Propagation speed in m/s.  Defaults to dry air at 20 C.
    """

    n_per_axis: int
    spacing_m: float
    sound_speed_m_s: float = SOUND_SPEED_AIR_M_S

    def __post_init__(self):
        if int(self.n_per_axis) != self.n_per_axis:
            raise ValueError(f"n_per_axis must be an integer, got {self.n_per_axis!r}")
        object.__setattr__(self, "n_per_axis", int(self.n_per_axis))
        object.__setattr__(self, "spacing_m", float(self.spacing_m))
        object.__setattr__(self, "sound_speed_m_s", float(self.sound_speed_m_s))
        if self.n_per_axis < 3:
            raise ValueError(f"n_per_axis must be >= 3, got {self.n_per_axis}")
        if not self.spacing_m > 0:
            raise ValueError(f"spacing_m must be positive, got {self.spacing_m}")
        if not self.sound_speed_m_s > 0:
            raise ValueError(f"sound_speed_m_s must be positive, got {self.sound_speed_m_s}")

    def axis_indices(self) -> np.ndarray:
        """Centered integer sensor indices along one axis (length N)."""
        n = self.n_per_axis
        return np.arange(n) - n // 2

    @property
    def lattice_half_width(self) -> int:
        """Largest index magnitude present on both half-axes.

        (N-1)/2 for odd N; (N-2)/2 for even N where the positive side
        stops at N/2-1.
        """
        n = self.n_per_axis
        return (n - 1) // 2 if n % 2 else (n - 2) // 2


@dataclass(frozen=True)
class FrequencyBand:
    """A closed frequency interval [f_min_hz, f_max_hz].

    ``kind`` is "strict" for the index-range bound of the lattice or
    "relaxed" for a bound rescaled by the target pattern's support.
    """

    f_min_hz: float
    f_max_hz: float
    kind: str = "strict"

    def __post_init__(self):
        object.__setattr__(self, "f_min_hz", float(self.f_min_hz))
        object.__setattr__(self, "f_max_hz", float(self.f_max_hz))
        if not (self.f_min_hz > 0 and self.f_max_hz > 0):
            raise ValueError("band edges must be positive frequencies")
        if self.f_min_hz > self.f_max_hz:
            raise ValueError(
                f"empty band: f_min {self.f_min_hz} Hz exceeds f_max {self.f_max_hz} Hz"
            )
        if self.kind not in ("strict", "relaxed"):
            raise ValueError(f"band kind must be 'strict' or 'relaxed', got {self.kind!r}")

    def contains(self, f_hz, rtol: float = 1e-12):
        """Whether frequencies lie inside the band (edges included).

        A tiny relative slack absorbs round-off at the exact edges.
        """
        f = np.asarray(f_hz, dtype=float)
        inside = (f >= self.f_min_hz * (1.0 - rtol)) & (f <= self.f_max_hz * (1.0 + rtol))
        return bool(inside) if inside.ndim == 0 else inside

    def frequencies(self, count: int, spacing: str = "linear") -> np.ndarray:
        """``count`` frequencies spanning the band, linearly or log spaced."""
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        if spacing == "linear":
            return np.linspace(self.f_min_hz, self.f_max_hz, count)
        if spacing == "log":
            return np.geomspace(self.f_min_hz, self.f_max_hz, count)
        raise ValueError(f"spacing must be 'linear' or 'log', got {spacing!r}")


def sensor_positions(cfg: ArrayConfig):
    """Index pairs and physical positions of all N^2 sensors.

    Returns
    -------
    indices : (N^2, 2) int ndarray
        Centered (n1, n2) index pairs, row-major over the first axis.
    positions_m : (N^2, 2) float ndarray
        Corresponding (x, y) positions, ``index * spacing_m`` per axis.
    """
    idx = cfg.axis_indices()
    n1, n2 = np.meshgrid(idx, idx, indexing="ij")
    indices = np.column_stack([n1.ravel(), n2.ravel()])
    return indices, indices * cfg.spacing_m


def strict_band(cfg: ArrayConfig) -> FrequencyBand:
    """Frequency band over which the visible disk fits the index range.

    Lower edge c/(N*d) puts the visible-region radius at exactly one
    lattice step; the upper edge keeps it within the half-width of the
    centered index range, which differs between odd and even N.
    """
    n, d, c = cfg.n_per_axis, cfg.spacing_m, cfg.sound_speed_m_s
    f_min = c / (n * d)
    if n % 2:
        f_max = c * (n - 1) / (2 * n * d)
    else:
        f_max = c * (n - 2) / (2 * n * d)
    return FrequencyBand(f_min, f_max, kind="strict")


def radius_for_frequency(cfg: ArrayConfig, f_hz):
    """Visible-region radius R = f*N*d/c in lattice units at frequency f."""
    f = np.asarray(f_hz, dtype=float)
    if np.any(f <= 0):
        raise ValueError("frequency must be positive")
    r = f * cfg.n_per_axis * cfg.spacing_m / cfg.sound_speed_m_s
    return float(r) if r.ndim == 0 else r


def spacing_bounds(cfg: ArrayConfig, wavelength_m: float):
    """Sensor-spacing bounds (lower_m, upper_m) for a given wavelength.

    upper = (N-1)*lambda/(2N) tightens the classical lambda/2 sampling
    bound for a finite grid (and recovers it as N grows); lower = lambda/N
    keeps the visible disk at least one lattice step wide.
    """
    if not wavelength_m > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength_m}")
    n = cfg.n_per_axis
    return wavelength_m / n, (n - 1) * wavelength_m / (2 * n)
