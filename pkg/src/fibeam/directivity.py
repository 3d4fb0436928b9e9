"""Forward evaluation: realized array response over direction, plus metrics.

The response to a unit far-field plane wave from (theta, phi) at frequency
f is the steering-vector sum

    b(theta, phi) = sum_{n1,n2} w[n1, n2]
                    * exp(-j*(2*pi*f/c) * d * (n1*sin(theta)*cos(phi)
                                               + n2*sin(theta)*sin(phi)))

evaluated here with separable per-axis phase factors.  At the lattice
angles theta = arcsin(rho/R), phi = atan2(v, u) this sum coincides with
the centered forward DFT of the weights at (u, v), which ties the realized
response back to the synthesized gain grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._io import atomic_write_text, fmt
from .arraygeom import ArrayConfig
from .patterns import BeamPattern, TwoLevelPattern
from .synthesis import WeightMatrix

#: Default angular steps matching a 181 x 361 map: 0.5 deg in elevation
#: over [0, 90] deg, 1 deg in azimuth over [0, 360] deg.
DEFAULT_THETA_STEP_DEG = 0.5
DEFAULT_PHI_STEP_DEG = 1.0


def default_theta_grid(step_deg: float = DEFAULT_THETA_STEP_DEG) -> np.ndarray:
    return np.radians(np.arange(0.0, 90.0 + 0.5 * step_deg, step_deg))


def default_phi_grid(step_deg: float = DEFAULT_PHI_STEP_DEG) -> np.ndarray:
    return np.radians(np.arange(0.0, 360.0 + 0.5 * step_deg, step_deg))


@dataclass(frozen=True, eq=False)
class DirectivityMap:
    """Complex response on an elevation x azimuth grid for one frequency."""

    f_hz: float
    theta: np.ndarray
    phi: np.ndarray
    values: np.ndarray  # complex, shape (len(theta), len(phi))

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def _check_grids(theta, phi):
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if theta.size == 0 or phi.size == 0:
        raise ValueError("angle grids must be nonempty")
    if np.any(theta < 0) or np.any(theta > np.pi / 2):
        raise ValueError("theta grid must lie in [0, pi/2]")
    if np.any(phi < 0) or np.any(phi > 2 * np.pi):
        raise ValueError("phi grid must lie in [0, 2*pi]")
    return theta, phi


def directivity_points(cfg: ArrayConfig, wm: WeightMatrix, theta, phi) -> np.ndarray:
    """Response at paired scattered directions (theta[k], phi[k])."""
    theta, phi = _check_grids(theta, phi)
    theta, phi = np.broadcast_arrays(theta, phi)
    idx = cfg.axis_indices()
    kappa = 2.0 * np.pi * wm.f_hz * cfg.spacing_m / cfg.sound_speed_m_s
    alpha = np.sin(theta) * np.cos(phi)
    beta = np.sin(theta) * np.sin(phi)
    a = np.exp(-1j * kappa * np.outer(idx, alpha))
    b = np.exp(-1j * kappa * np.outer(idx, beta))
    return np.einsum("ip,ip->p", a, wm.weights @ b)


def directivity(
    cfg: ArrayConfig,
    wm: WeightMatrix,
    theta=None,
    phi=None,
    block: int = 16384,
) -> DirectivityMap:
    """Evaluate the steering-vector sum over an elevation x azimuth grid.

    Directions are processed in blocks of ``block`` to bound memory for
    large arrays; the result is independent of the blocking.
    """
    theta = default_theta_grid() if theta is None else theta
    phi = default_phi_grid() if phi is None else phi
    theta, phi = _check_grids(theta, phi)
    if wm.weights.shape != (cfg.n_per_axis, cfg.n_per_axis):
        raise ValueError(
            f"weight matrix shape {wm.weights.shape} does not match N={cfg.n_per_axis}"
        )

    th_flat = np.repeat(theta, len(phi))
    ph_flat = np.tile(phi, len(theta))
    out = np.empty(th_flat.size, dtype=complex)
    for start in range(0, th_flat.size, block):
        sl = slice(start, min(start + block, th_flat.size))
        out[sl] = directivity_points(cfg, wm, th_flat[sl], ph_flat[sl])
    return DirectivityMap(wm.f_hz, theta, phi, out.reshape(len(theta), len(phi)))


@dataclass(frozen=True, eq=False)
class CrossCut:
    """Symmetric elevation cut through two opposite azimuths.

    ``theta_signed`` runs from -max(theta) (along the second azimuth of the
    pair) through 0 to +max(theta) (along the first).
    """

    f_hz: float
    phi_pair: tuple[float, float]
    theta_signed: np.ndarray
    magnitude: np.ndarray
    magnitude_db: np.ndarray


def _phi_column(dmap: DirectivityMap, phi_value: float) -> int:
    hit = np.nonzero(np.isclose(dmap.phi, phi_value, rtol=0.0, atol=1e-12))[0]
    if hit.size == 0:
        raise ValueError(
            f"azimuth {np.degrees(phi_value):g} deg is not on the map grid"
        )
    return int(hit[0])


def magnitude_db(mag) -> np.ndarray:
    """20*log10 magnitude; exact zeros map to -inf."""
    mag = np.asarray(mag, dtype=float)
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(mag)


def cross_cut(dmap: DirectivityMap, phi_pair=(0.0, np.pi)) -> CrossCut:
    """Concatenate two opposite-azimuth elevation cuts into one signed axis.

    The second azimuth supplies the negative-theta half.  When the map's
    theta grid starts at broadside the duplicate theta = 0 sample is kept
    once.
    """
    phi_a, phi_b = float(phi_pair[0]), float(phi_pair[1])
    col_a = _phi_column(dmap, phi_a)
    col_b = _phi_column(dmap, phi_b)
    mag_a = np.abs(dmap.values[:, col_a])
    mag_b = np.abs(dmap.values[:, col_b])

    drop_dup = 1 if dmap.theta[0] == 0.0 else 0
    theta_signed = np.concatenate([-dmap.theta[::-1], dmap.theta[drop_dup:]])
    mag = np.concatenate([mag_b[::-1], mag_a[drop_dup:]])
    return CrossCut(dmap.f_hz, (phi_a, phi_b), theta_signed, mag, magnitude_db(mag))


@dataclass(frozen=True)
class PatternMetrics:
    """Scalar quality figures for one realized map against its target.

    Angle-dependent figures are computed on the azimuth-averaged magnitude
    profile.  ``mainlobe_edge_theta`` is where that profile first drops
    below ``edge_ratio`` times the broadside magnitude (0.5, i.e. -6 dB
    amplitude, by default); it and ``peak_sidelobe_db`` are None when the
    broadside magnitude is zero or the profile never drops below the
    threshold.  ``level_ratio_db`` compares the plateau and shoulder of a
    two-level target and is None for other patterns.
    """

    f_hz: float
    mainlobe_edge_theta: float | None
    peak_sidelobe_db: float | None
    target_rms_error: float
    level_ratio_db: float | None


def _first_crossing(theta, profile, threshold):
    below = np.nonzero(profile < threshold)[0]
    if below.size == 0:
        return None, None
    i = int(below[0])
    if i == 0:
        return float(theta[0]), 0
    # linear interpolation between the bracketing samples
    span = profile[i - 1] - profile[i]
    frac = (profile[i - 1] - threshold) / span if span > 0 else 0.0
    return float(theta[i - 1] + frac * (theta[i] - theta[i - 1])), i


def metrics(dmap: DirectivityMap, pattern: BeamPattern, edge_ratio: float = 0.5) -> PatternMetrics:
    """Compute :class:`PatternMetrics` for a realized map.

    ``edge_ratio`` sets the mainlobe-edge threshold as a fraction of the
    broadside amplitude; use 1/sqrt(2) for the -3 dB power convention.
    """
    if not 0.0 < edge_ratio < 1.0:
        raise ValueError(f"edge_ratio must lie in (0, 1), got {edge_ratio}")
    mag = dmap.magnitude()
    profile = mag.mean(axis=1)
    broadside = float(profile[0])

    edge = None
    sidelobe_db = None
    if broadside > 0.0:
        edge, i_edge = _first_crossing(dmap.theta, profile, edge_ratio * broadside)
        if edge is not None and i_edge < len(profile):
            peak = float(profile[i_edge:].max())
            sidelobe_db = float(magnitude_db(peak / broadside)) if peak > 0 else None

    th_grid, ph_grid = np.meshgrid(dmap.theta, dmap.phi, indexing="ij")
    target = np.asarray(pattern.gain(th_grid, ph_grid), dtype=float)
    rms = float(np.sqrt(np.mean((mag - target) ** 2)))

    level_ratio = None
    if isinstance(pattern, TwoLevelPattern):
        plateau = float(np.interp(pattern.theta_c1 / 2.0, dmap.theta, profile))
        shoulder = float(
            np.interp((pattern.theta_c1 + pattern.theta_c2) / 2.0, dmap.theta, profile)
        )
        if plateau > 0 and shoulder > 0:
            level_ratio = float(20.0 * np.log10(plateau / shoulder))

    return PatternMetrics(
        f_hz=dmap.f_hz,
        mainlobe_edge_theta=edge,
        peak_sidelobe_db=sidelobe_db,
        target_rms_error=rms,
        level_ratio_db=level_ratio,
    )


# ---------------------------------------------------------------------------
# CSV emission

def write_directivity_csv(dmap: DirectivityMap, path):
    """Write a map as ``f_hz,theta_deg,phi_deg,mag,mag_db`` rows."""
    mag = dmap.magnitude()
    db = magnitude_db(mag)
    f_str = fmt(dmap.f_hz)
    lines = ["f_hz,theta_deg,phi_deg,mag,mag_db"]
    theta_deg = np.degrees(dmap.theta)
    phi_deg = np.degrees(dmap.phi)
    for i, td in enumerate(theta_deg):
        td_str = fmt(td)
        for j, pd in enumerate(phi_deg):
            lines.append(f"{f_str},{td_str},{fmt(pd)},{fmt(mag[i, j])},{fmt(db[i, j])}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def write_cross_cut_csv(cut: CrossCut, path):
    """Write a cut as ``theta_deg_signed,mag,mag_db`` rows."""
    lines = ["theta_deg_signed,mag,mag_db"]
    for t, m, db in zip(np.degrees(cut.theta_signed), cut.magnitude, cut.magnitude_db):
        lines.append(f"{fmt(t)},{fmt(m)},{fmt(db)}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def write_metrics_csv(metrics_list, path):
    """Write a per-frequency metrics summary table.

    The level_ratio_db column appears only when at least one row carries a
    two-level ratio.
    """
    with_ratio = any(m.level_ratio_db is not None for m in metrics_list)
    header = "f_hz,mainlobe_edge_theta_deg,peak_sidelobe_db,target_rms_error"
    if with_ratio:
        header += ",level_ratio_db"
    lines = [header]

    def opt(value, scale=1.0):
        return "" if value is None else fmt(value * scale)

    for m in metrics_list:
        row = ",".join(
            [
                fmt(m.f_hz),
                opt(m.mainlobe_edge_theta, 180.0 / np.pi),
                opt(m.peak_sidelobe_db),
                fmt(m.target_rms_error),
            ]
        )
        if with_ratio:
            row += "," + opt(m.level_ratio_db)
        lines.append(row)
    return atomic_write_text(path, "\n".join(lines) + "\n")
