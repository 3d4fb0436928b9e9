"""Broadband beamforming weight synthesis for uniform planar arrays.

Designs per-frequency complex sensor weights that realize an arbitrary
target beam pattern on a square N x N array: the target is expressed as a
gain over direction, resampled onto the integer (u, v) lattice of the
array at each frequency, and inverted with a centered 2D IDFT.  Forward
evaluation, quality metrics and a plane-wave simulation check close the
loop.
"""

from ._version import __version__
from .arraygeom import (
    SOUND_SPEED_AIR_M_S,
    ArrayConfig,
    FrequencyBand,
    radius_for_frequency,
    sensor_positions,
    spacing_bounds,
    strict_band,
)
from .patterns import (
    BeamPattern,
    ConePattern,
    SincPattern,
    TabulatedPattern,
    TwoLevelPattern,
    load_tabulated_csv,
)
from .uvgrid import DeformationReport, UvGainGrid, deformation_report, sample_uv_grid
from .spectral import NO_TAPER, Taper, apply_taper, centered_dft2, centered_idft2, taper_profile
from .synthesis import (
    WeightBank,
    WeightMatrix,
    load_weight_bank,
    save_weight_bank,
    synthesize,
)
from .directivity import (
    CrossCut,
    DirectivityMap,
    PatternMetrics,
    cross_cut,
    directivity,
    directivity_points,
    metrics,
    write_cross_cut_csv,
    write_directivity_csv,
    write_metrics_csv,
)
from .wavesim import PlaneWaveSource, beamform, sensor_snapshot

__all__ = [
    "__version__",
    "SOUND_SPEED_AIR_M_S",
    "ArrayConfig",
    "FrequencyBand",
    "radius_for_frequency",
    "sensor_positions",
    "spacing_bounds",
    "strict_band",
    "BeamPattern",
    "ConePattern",
    "TwoLevelPattern",
    "SincPattern",
    "TabulatedPattern",
    "load_tabulated_csv",
    "UvGainGrid",
    "DeformationReport",
    "sample_uv_grid",
    "deformation_report",
    "Taper",
    "NO_TAPER",
    "taper_profile",
    "apply_taper",
    "centered_dft2",
    "centered_idft2",
    "WeightMatrix",
    "WeightBank",
    "synthesize",
    "save_weight_bank",
    "load_weight_bank",
    "DirectivityMap",
    "CrossCut",
    "PatternMetrics",
    "directivity",
    "directivity_points",
    "cross_cut",
    "metrics",
    "write_directivity_csv",
    "write_cross_cut_csv",
    "write_metrics_csv",
    "PlaneWaveSource",
    "sensor_snapshot",
    "beamform",
]
