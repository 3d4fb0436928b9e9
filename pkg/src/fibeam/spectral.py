"""Centered 2D DFT/IDFT and the radial anti-ringing taper.

Both transform directions index rows and columns by the centered integer
range -(N//2) .. and are realized as index-shift wrappers around the FFT,
which is exact for odd and even N alike.  Normalization puts 1/N^2 on the
inverse, so forward-transforming synthesized weights reproduces a target
gain grid at unit scale.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .uvgrid import UvGainGrid


def _square(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square 2-d matrix, got shape {a.shape}")
    return a


def centered_idft2(grid) -> np.ndarray:
    """Inverse centered 2D DFT of a square matrix.

    w[n1, n2] = (1/N^2) * sum_{u,v} grid[u, v] * exp(+2j*pi*(n1*u + n2*v)/N)
    with all indices over the centered range.
    """
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(_square(grid))))


def centered_dft2(weights) -> np.ndarray:
    """Forward counterpart of :func:`centered_idft2` (unnormalized sum)."""
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(_square(weights))))


@dataclass(frozen=True)
class Taper:
    """Radial roll-off applied to a gain grid before inversion.

    kind "none" leaves the grid untouched; "tukey" multiplies by a
    raised-cosine profile over the outer ``edge_frac`` of the grid's
    nonzero support, reaching 0 at the support edge.
    """

    kind: str = "none"
    edge_frac: float = 0.25

    def __post_init__(self):
        if self.kind not in ("none", "tukey"):
            raise ValueError(f"taper kind must be 'none' or 'tukey', got {self.kind!r}")
        if not 0.0 < self.edge_frac <= 1.0:
            raise ValueError(f"edge_frac must lie in (0, 1], got {self.edge_frac}")

    @classmethod
    def parse(cls, text: str) -> "Taper":
        """Parse "none", "tukey" or "tukey:FRAC"."""
        text = text.strip().lower()
        if text == "none":
            return cls("none")
        if text == "tukey":
            return cls("tukey")
        if text.startswith("tukey:"):
            try:
                frac = float(text.split(":", 1)[1])
            except ValueError as exc:
                raise ValueError(f"bad taper spec {text!r}") from exc
            return cls("tukey", frac)
        raise ValueError(f"bad taper spec {text!r}; expected none|tukey|tukey:FRAC")

    def __str__(self):
        return "none" if self.kind == "none" else f"tukey:{self.edge_frac:g}"


NO_TAPER = Taper("none")


def taper_profile(taper: Taper, rho, support_radius: float) -> np.ndarray:
    """Radial attenuation factor in [0, 1] at lattice radius ``rho``.

    Unity inside (1 - edge_frac) * support_radius, raised-cosine down to 0
    at support_radius, 0 beyond.
    """
    rho = np.asarray(rho, dtype=float)
    if taper.kind == "none" or support_radius <= 0:
        return np.ones_like(rho)
    knee = (1.0 - taper.edge_frac) * support_radius
    factor = np.ones_like(rho)
    roll = (rho > knee) & (rho <= support_radius)
    factor[roll] = 0.5 * (1.0 + np.cos(np.pi * (rho[roll] - knee) / (support_radius - knee)))
    factor[rho > support_radius] = 0.0
    return factor


def apply_taper(grid: UvGainGrid, taper: Taper = NO_TAPER) -> UvGainGrid:
    """Apply the taper's radial profile to a gain grid.

    With kind "none" the input grid is returned unchanged.  The tapered
    values never exceed the originals and everything outside the original
    support stays zero.
    """
    if taper.kind == "none":
        return grid
    support = grid.support_radius()
    if support <= 0:
        return grid
    factor = taper_profile(taper, grid.lattice_rho(), support)
    return replace(grid, values=grid.values * factor)
