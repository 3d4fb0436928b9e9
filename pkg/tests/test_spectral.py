import numpy as np
import pytest
from numpy.testing import assert_allclose

from fibeam import (
    ArrayConfig,
    ConePattern,
    NO_TAPER,
    Taper,
    apply_taper,
    centered_dft2,
    centered_idft2,
    sample_uv_grid,
    taper_profile,
)


def centered_range(n):
    return np.arange(n) - n // 2


def idft2_reference(grid):
    """O(N^4) double sum over centered indices; the independent oracle."""
    n = grid.shape[0]
    idx = centered_range(n)
    out = np.zeros((n, n), dtype=complex)
    for a, n1 in enumerate(idx):
        for b, n2 in enumerate(idx):
            phase = np.exp(2j * np.pi * (n1 * idx[:, None] + n2 * idx[None, :]) / n)
            out[a, b] = np.sum(grid * phase) / n**2
    return out


def dft2_reference(weights):
    n = weights.shape[0]
    idx = centered_range(n)
    out = np.zeros((n, n), dtype=complex)
    for a, u in enumerate(idx):
        for b, v in enumerate(idx):
            phase = np.exp(-2j * np.pi * (u * idx[:, None] + v * idx[None, :]) / n)
            out[a, b] = np.sum(weights * phase)
    return out


class TestCenteredTransforms:
    @pytest.mark.parametrize("n", [4, 5])
    def test_all_ones_grid_is_impulse(self, n):
        w = centered_idft2(np.ones((n, n)))
        expected = np.zeros((n, n))
        expected[n // 2, n // 2] = 1.0
        assert_allclose(w, expected, atol=1e-15)

    def test_centered_delta_gives_constant(self):
        grid = np.zeros((5, 5))
        grid[2, 2] = 1.0  # lattice point (0, 0)
        assert_allclose(centered_idft2(grid), np.full((5, 5), 1 / 25), atol=1e-16)

    def test_center_impulse_forward_is_all_ones(self):
        w = np.zeros((7, 7))
        w[3, 3] = 1.0
        assert_allclose(centered_dft2(w), np.ones((7, 7)), atol=1e-15)

    def test_symmetric_real_grid_gives_real_weights(self):
        rng = np.random.default_rng(3)
        h = rng.uniform(size=(9, 9))
        grid = h + h[::-1, ::-1]  # symmetric under index negation
        w = centered_idft2(grid)
        assert np.max(np.abs(w.imag)) < 1e-12
        assert_allclose(w, idft2_reference(grid), atol=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5, 8])
    def test_round_trip_identity(self, n):
        rng = np.random.default_rng(n)
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        back = centered_dft2(centered_idft2(g))
        assert np.max(np.abs(back - g)) / np.max(np.abs(g)) < 1e-10
        forth = centered_idft2(centered_dft2(g))
        assert np.max(np.abs(forth - g)) / np.max(np.abs(g)) < 1e-10

    def test_n3_hand_case(self):
        # impulse at lattice point (1, 0): forward spectrum e^{-2 pi i u / 3}
        w = np.zeros((3, 3), dtype=complex)
        w[2, 1] = 1.0  # (n1, n2) = (1, 0)
        b = centered_dft2(w)
        idx = centered_range(3)
        expected = np.exp(-2j * np.pi * idx[:, None] / 3) * np.ones((1, 3))
        assert_allclose(b, expected, atol=1e-15)

    @pytest.mark.parametrize("n", [3, 4, 5, 8, 15, 16])
    def test_matches_double_sum_oracle(self, n):
        rng = np.random.default_rng(100 + n)
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        scale = np.max(np.abs(x))
        assert np.max(np.abs(centered_idft2(x) - idft2_reference(x))) / scale < 1e-9
        assert np.max(np.abs(centered_dft2(x) - dft2_reference(x))) / scale < 1e-9

    @pytest.mark.parametrize("n", [5, 8])
    def test_linearity(self, n):
        rng = np.random.default_rng(42)
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a, b = 1.7 - 0.3j, -0.4 + 2.1j
        for transform in (centered_idft2, centered_dft2):
            lhs = transform(a * x + b * y)
            rhs = a * transform(x) + b * transform(y)
            assert np.max(np.abs(lhs - rhs)) / np.max(np.abs(lhs)) < 1e-10

    @pytest.mark.parametrize("n", [4, 5, 15])
    def test_parseval(self, n):
        rng = np.random.default_rng(n + 1)
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        w = centered_idft2(b)
        lhs = np.sum(np.abs(w) ** 2)
        rhs = np.sum(np.abs(b) ** 2) / n**2
        assert abs(lhs - rhs) / rhs < 1e-9

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            centered_idft2(np.ones((3, 4)))
        with pytest.raises(ValueError, match="square"):
            centered_dft2(np.ones(5))


class TestTaper:
    def test_parse_and_str(self):
        assert Taper.parse("none") == Taper("none")
        assert Taper.parse("tukey") == Taper("tukey", 0.25)
        assert Taper.parse("tukey:0.3") == Taper("tukey", 0.3)
        assert str(Taper.parse("tukey:0.3")) == "tukey:0.3"
        assert str(NO_TAPER) == "none"
        assert Taper.parse(str(Taper("tukey", 0.125))) == Taper("tukey", 0.125)

    @pytest.mark.parametrize("text", ["hann", "tukey:", "tukey:x", "tukey:0.3:4"])
    def test_parse_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            Taper.parse(text)

    @pytest.mark.parametrize("frac", [0.0, -0.1, 1.5])
    def test_invalid_edge_frac(self, frac):
        with pytest.raises(ValueError):
            Taper("tukey", frac)

    def test_profile_endpoints(self):
        taper = Taper("tukey", 0.3)
        rho = np.array([0.0, 6.9, 7.0, 8.5, 10.0, 10.5])
        fac = taper_profile(taper, rho, support_radius=10.0)
        assert fac[0] == 1.0
        assert fac[1] == 1.0  # below the knee at 7.0
        assert fac[2] == 1.0  # knee itself is untouched
        assert 0.0 < fac[3] < 1.0
        assert fac[4] == pytest.approx(0.0, abs=1e-15)  # support edge
        assert fac[5] == 0.0  # beyond support

    def test_none_taper_is_identity(self, cfg25, cone15):
        grid = sample_uv_grid(cfg25, cone15, 16000.0)
        assert apply_taper(grid, NO_TAPER) is grid

    def test_tukey_on_cone_grid(self, cfg25, cone15):
        grid = sample_uv_grid(cfg25, cone15, 16000.0)
        tapered = apply_taper(grid, Taper("tukey", 0.3))
        rho = grid.lattice_rho()
        support = grid.support_radius()
        edge = np.isclose(rho, support)
        assert np.all(tapered.values[edge] == 0.0)
        inner = rho <= 0.7 * support
        assert_allclose(tapered.values[inner], grid.values[inner], rtol=0, atol=0)
        # roll-off only attenuates
        assert np.all(tapered.values <= grid.values + 1e-15)
        assert np.all(tapered.values >= 0)

    def test_tukey_keeps_outside_zero(self, cfg25, cone15):
        grid = sample_uv_grid(cfg25, cone15, 16000.0)
        tapered = apply_taper(grid, Taper("tukey", 1.0))
        assert np.all(tapered.values[grid.values == 0] == 0.0)

    def test_taper_on_empty_grid_is_identity(self, cfg25):
        from fibeam import TabulatedPattern

        zero = TabulatedPattern(
            np.array([0.0, np.pi / 2]), np.array([0.0, np.pi]), np.zeros((2, 2))
        )
        grid = sample_uv_grid(cfg25, zero, 8000.0)
        assert apply_taper(grid, Taper("tukey", 0.5)) is grid
