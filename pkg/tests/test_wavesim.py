import numpy as np
import pytest
from numpy.testing import assert_allclose

from fibeam import (
    ArrayConfig,
    PlaneWaveSource,
    beamform,
    directivity_points,
    sensor_snapshot,
    synthesize,
)


def test_broadside_wave_hits_all_sensors_equally():
    cfg = ArrayConfig(5, 0.01)
    src = PlaneWaveSource(theta=0.0, phi=1.3, f_hz=8000.0, amplitude=2.0, phase=0.7)
    snap = sensor_snapshot(cfg, src)
    assert_allclose(snap, 2.0 * np.exp(0.7j), rtol=1e-15)


def test_zero_amplitude_gives_zero_field():
    cfg = ArrayConfig(5, 0.01)
    snap = sensor_snapshot(cfg, PlaneWaveSource(0.4, 0.2, 8000.0, amplitude=0.0))
    assert np.all(snap == 0)


def test_endfire_half_wavelength_alternates_sign():
    # d = lambda/2 along x: adjacent x-sensors see a pi phase step
    cfg = ArrayConfig(5, 0.01)
    f = cfg.sound_speed_m_s / (2 * cfg.spacing_m)
    snap = sensor_snapshot(cfg, PlaneWaveSource(np.pi / 2, 0.0, f))
    ratios = snap[1:, :] / snap[:-1, :]
    assert_allclose(ratios, -1.0, rtol=1e-12)
    # constant along y
    assert_allclose(snap[:, 1:], snap[:, :-1], rtol=1e-12)


def test_snapshot_conjugation_symmetry():
    cfg = ArrayConfig(7, 0.013)
    snap = sensor_snapshot(cfg, PlaneWaveSource(0.9, 2.1, 5000.0))
    assert_allclose(snap[::-1, ::-1], np.conj(snap), rtol=1e-15)


def test_beamform_linearity():
    cfg = ArrayConfig(5, 0.01)
    rng = np.random.default_rng(1)
    w = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    s1 = sensor_snapshot(cfg, PlaneWaveSource(0.3, 0.5, 8000.0, amplitude=1.5))
    s2 = sensor_snapshot(cfg, PlaneWaveSource(1.1, 4.0, 8000.0, phase=0.4))
    lhs = beamform(w, s1 + s2)
    rhs = beamform(w, s1) + beamform(w, s2)
    assert lhs == pytest.approx(rhs, rel=1e-14)


def test_zero_weights_zero_output():
    cfg = ArrayConfig(5, 0.01)
    snap = sensor_snapshot(cfg, PlaneWaveSource(0.3, 0.5, 8000.0))
    assert beamform(np.zeros((5, 5)), snap) == 0.0


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError, match="shape"):
        beamform(np.zeros((5, 5)), np.zeros((7, 7)))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"theta": -0.1, "phi": 0.0, "f_hz": 100.0},
        {"theta": np.pi / 2 + 0.1, "phi": 0.0, "f_hz": 100.0},
        {"theta": 0.1, "phi": 0.0, "f_hz": 0.0},
        {"theta": 0.1, "phi": 0.0, "f_hz": 100.0, "amplitude": -1.0},
    ],
)
def test_invalid_sources(kwargs):
    with pytest.raises(ValueError):
        PlaneWaveSource(**kwargs)


@pytest.mark.parametrize("pattern_name", ["cone15", "two_level", "sinc6"])
def test_beamform_matches_directivity(request, cfg25, pattern_name):
    # independent-path equivalence: snapshot + weighted sum vs steering sum
    pattern = request.getfixturevalue(pattern_name)
    bank = synthesize(cfg25, pattern, [8000.0, 16000.0])
    rng = np.random.default_rng(99)
    theta = rng.uniform(0, np.pi / 2, 100)
    phi = rng.uniform(0, 2 * np.pi, 100)
    for entry in bank.entries:
        predicted = directivity_points(cfg25, entry, theta, phi)
        measured = np.array([
            beamform(entry, sensor_snapshot(cfg25, PlaneWaveSource(t, p, entry.f_hz)))
            for t, p in zip(theta, phi)
        ])
        scale = np.max(np.abs(predicted))
        assert np.max(np.abs(measured - predicted)) / scale < 1e-9


def test_beamform_accepts_weight_matrix(cfg25, cone15):
    bank = synthesize(cfg25, cone15, [16000.0])
    entry = bank.entries[0]
    src = PlaneWaveSource(0.1, 0.2, 16000.0)
    snap = sensor_snapshot(cfg25, src)
    assert beamform(entry, snap) == beamform(entry.weights, snap)
