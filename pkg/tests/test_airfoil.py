import numpy as np
import pytest

from seqdesign.airfoil import (
    AirfoilCoordinates,
    airfoil_parameter_names,
    cosine_stations,
    load_selig,
    resample_airfoil,
)
from seqdesign.errors import GeometryError, ParseError


def diamond_airfoil():
    # Selig order: TE -> upper -> LE -> lower -> TE
    pts = np.array(
        [
            [1.0, 0.0],
            [0.5, 0.1],
            [0.0, 0.0],
            [0.5, -0.1],
            [1.0, 0.0],
        ]
    )
    return AirfoilCoordinates("diamond", pts)


class TestParsing:
    def test_load_selig(self, tmp_path):
        p = tmp_path / "diamond.dat"
        p.write_text("diamond airfoil\n1.0 0.0\n0.5 0.1\n0.0 0.0\n0.5 -0.1\n1.0 0.0\n")
        foil = load_selig(p)
        assert foil.name == "diamond airfoil"
        assert foil.points.shape == (5, 2)

    def test_bad_pair_rejected(self, tmp_path):
        p = tmp_path / "bad.dat"
        p.write_text("bad\n1.0 0.0 0.5\n")
        with pytest.raises(ParseError):
            load_selig(p)

    def test_too_few_points(self):
        with pytest.raises(GeometryError):
            AirfoilCoordinates("tiny", np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]]))

    def test_x_range_validated(self):
        pts = np.array([[2.0, 0.0], [0.5, 0.1], [0.0, 0.0], [0.5, -0.1]])
        with pytest.raises(GeometryError):
            AirfoilCoordinates("wide", pts)


class TestResample:
    def test_length_120_for_30_points(self):
        assert resample_airfoil(diamond_airfoil(), 30).shape == (120,)

    def test_length_200_for_50_points(self):
        assert resample_airfoil(diamond_airfoil(), 50).shape == (200,)

    def test_flat_plate_all_zero_y(self):
        pts = np.array([[1.0, 0.0], [0.6, 0.0], [0.0, 0.0], [0.4, 0.0], [1.0, 0.0]])
        vec = resample_airfoil(AirfoilCoordinates("plate", pts), 10)
        ys = vec.reshape(-1, 2)[:, 1]
        np.testing.assert_array_equal(ys, np.zeros(20))

    def test_layout_interleaved_upper_then_lower(self):
        n = 5
        vec = resample_airfoil(diamond_airfoil(), n)
        upper = vec[: 2 * n].reshape(n, 2)
        lower = vec[2 * n :].reshape(n, 2)
        np.testing.assert_allclose(upper[:, 0], cosine_stations(n))
        # diamond: upper y peaks mid-chord at +0.1, lower at -0.1
        assert upper[:, 1].max() == pytest.approx(0.1, abs=1e-12)
        assert lower[:, 1].min() == pytest.approx(-0.1, abs=1e-12)

    def test_no_nan_for_valid_input(self):
        vec = resample_airfoil(diamond_airfoil(), 30)
        assert np.all(np.isfinite(vec))

    def test_non_monotone_surface_rejected(self):
        pts = np.array([[1.0, 0.0], [0.5, 0.1], [0.7, 0.2], [0.0, 0.0], [0.5, -0.1], [1.0, 0.0]])
        with pytest.raises(GeometryError):
            resample_airfoil(AirfoilCoordinates("loop", pts), 10)

    def test_parameter_names_match_layout(self):
        names = airfoil_parameter_names(30)
        assert len(names) == 120
        assert names[0] == "up_x0" and names[1] == "up_y0" and names[-1] == "lo_y29"
