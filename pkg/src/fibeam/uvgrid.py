"""Resampling of spherical target gains onto the integer (u, v) lattice.

At frequency f the visible region of a square array is the disk
sqrt(u^2 + v^2) <= R with R = f*N*d/c in lattice units.  Each integer
lattice point inside the disk maps back to a physical direction through

    theta = arcsin(sqrt(u^2 + v^2) / R),   phi = atan2(v, u)

and takes the target gain there; points outside the disk carry gain 0, as
no propagating direction reaches them.  Points exactly on the rim count as
inside (theta = pi/2).

R >= 1 is required: it guarantees the center plus the first four axis
points (five lattice points in total) fall inside the visible disk, the
minimum support for the resampling to carry any shape information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arraygeom import ArrayConfig, FrequencyBand, radius_for_frequency, strict_band
from .patterns import BeamPattern

#: Relative slack when testing R >= 1, absorbing round-off at the band edge.
_RADIUS_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class UvGainGrid:
    """Target gain sampled on the centered integer lattice for one frequency.

    ``values[i, j]`` is the gain at lattice point (u, v) where u, v run over
    the centered sensor index range along axes 0 and 1 respectively.
    """

    n_per_axis: int
    f_hz: float
    radius: float
    values: np.ndarray

    def indices(self) -> np.ndarray:
        n = self.n_per_axis
        return np.arange(n) - n // 2

    def lattice_rho(self) -> np.ndarray:
        """Radial distance of every lattice point, shaped like ``values``."""
        idx = self.indices()
        u, v = np.meshgrid(idx, idx, indexing="ij")
        return np.hypot(u, v)

    def support_radius(self) -> float:
        """Largest lattice radius carrying a nonzero value (0 if none)."""
        rho = self.lattice_rho()
        nz = self.values != 0
        return float(rho[nz].max()) if np.any(nz) else 0.0


def _sample_values(cfg: ArrayConfig, pattern: BeamPattern, f_hz: float):
    radius = radius_for_frequency(cfg, f_hz)
    idx = cfg.axis_indices()
    u, v = np.meshgrid(idx, idx, indexing="ij")
    rho = np.hypot(u, v)
    inside = rho <= radius
    theta = np.arcsin(np.clip(rho / radius, 0.0, 1.0))
    phi = np.arctan2(v, u)
    values = np.where(inside, pattern.gain(theta, phi), 0.0)
    return values, radius


def sample_uv_grid(cfg: ArrayConfig, pattern: BeamPattern, f_hz: float) -> UvGainGrid:
    """Sample ``pattern`` onto the integer (u, v) lattice at frequency ``f_hz``.

    Raises
    ------
    ValueError
        If the visible-region radius R is below 1, i.e. the frequency is
        below the representable band of the array.
    """
    radius = radius_for_frequency(cfg, f_hz)
    if radius < 1.0 - _RADIUS_RTOL:
        f_min = strict_band(cfg).f_min_hz
        raise ValueError(
            f"frequency {f_hz} Hz is below the representable band: visible-region "
            f"radius R = {radius:.6g} < 1 (minimum frequency {f_min:.6g} Hz)"
        )
    values, radius = _sample_values(cfg, pattern, f_hz)
    return UvGainGrid(cfg.n_per_axis, float(f_hz), radius, values)


@dataclass(frozen=True)
class DeformationReport:
    """Advisory geometry check for one (array, pattern, frequency) triple.

    Attributes
    ----------
    support_radius : float
        Radius of the pattern's support circle on the lattice,
        R * sin(support_theta).
    clipped : bool
        Support circle exceeds the lattice half-width, so the outer part of
        the target is cut off (deformation at the high-frequency end).
    under_resolved : bool
        Support circle smaller than the first lattice ring, so only the
        center point can carry the target (low-frequency end).
    nonzero_points : int
        Lattice points with nonzero target gain at this frequency.
    relaxed_band : FrequencyBand or None
        The strict band rescaled by 1/sin(support_theta): frequencies for
        which the support circle itself (rather than the whole visible
        disk) fits the lattice.  None for a pattern with empty support.
    """

    f_hz: float
    radius: float
    support_radius: float
    lattice_half_width: int
    clipped: bool
    under_resolved: bool
    nonzero_points: int
    relaxed_band: FrequencyBand | None

    @property
    def deformed(self) -> bool:
        """True when the target cannot be represented faithfully."""
        return self.clipped or self.under_resolved


def deformation_report(cfg: ArrayConfig, pattern: BeamPattern, f_hz: float) -> DeformationReport:
    """Report whether the pattern's lattice footprint is deformed at ``f_hz``.

    Never raises for positive frequencies; this is an advisory check usable
    outside the representable band.
    """
    values, radius = _sample_values(cfg, pattern, f_hz)
    support_theta = pattern.support_theta
    support_radius = radius * np.sin(support_theta)
    half_width = cfg.lattice_half_width

    relaxed = None
    if support_theta > 0:
        s = np.sin(support_theta)
        base = strict_band(cfg)
        relaxed = FrequencyBand(base.f_min_hz / s, base.f_max_hz / s, kind="relaxed")

    return DeformationReport(
        f_hz=float(f_hz),
        radius=radius,
        support_radius=float(support_radius),
        lattice_half_width=half_width,
        clipped=bool(support_radius > half_width),
        under_resolved=bool(support_radius < 1.0 - _RADIUS_RTOL),
        nonzero_points=int(np.count_nonzero(values)),
        relaxed_band=relaxed,
    )
