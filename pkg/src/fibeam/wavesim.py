"""Plane-wave sensor snapshots and frequency-domain beamforming.

Independent physical check of the synthesis chain: simulate what each
sensor measures for a far-field single-tone source, apply the weights as a
plain weighted sum, and compare the measured gain with the predicted
directivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arraygeom import ArrayConfig
from .synthesis import WeightMatrix


@dataclass(frozen=True)
class PlaneWaveSource:
    """Far-field single-tone source arriving from (theta, phi)."""

    theta: float
    phi: float
    f_hz: float
    amplitude: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi / 2:
            raise ValueError(f"source theta must lie in [0, pi/2], got {self.theta}")
        if not self.f_hz > 0:
            raise ValueError(f"source frequency must be positive, got {self.f_hz}")
        if not self.amplitude >= 0:
            raise ValueError(f"source amplitude must be nonnegative, got {self.amplitude}")


def sensor_snapshot(cfg: ArrayConfig, src: PlaneWaveSource) -> np.ndarray:
    """Complex sensor values (N x N, centered index layout) for one source.

    p[n1, n2] = amplitude * exp(j*phase)
                * exp(-j*(2*pi*f/c) * d * (n1*sin(theta)*cos(phi)
                                           + n2*sin(theta)*sin(phi)))
    """
    idx = cfg.axis_indices()
    n1, n2 = np.meshgrid(idx, idx, indexing="ij")
    k = 2.0 * np.pi * src.f_hz / cfg.sound_speed_m_s
    path = cfg.spacing_m * (
        n1 * np.sin(src.theta) * np.cos(src.phi)
        + n2 * np.sin(src.theta) * np.sin(src.phi)
    )
    return src.amplitude * np.exp(1j * (src.phase - k * path))


def beamform(weights, snapshot) -> complex:
    """Beamformer output: the weighted sum of sensor values."""
    w = weights.weights if isinstance(weights, WeightMatrix) else np.asarray(weights)
    snapshot = np.asarray(snapshot)
    if w.shape != snapshot.shape:
        raise ValueError(
            f"weights shape {w.shape} does not match snapshot shape {snapshot.shape}"
        )
    return complex(np.sum(w * snapshot))
