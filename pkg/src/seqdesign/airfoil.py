"""Selig-format airfoil parsing and fixed-station resampling.

A Selig trace runs trailing edge -> upper surface -> leading edge -> lower
surface -> trailing edge. Resampling splits the trace at the minimum-x point
and interpolates each surface at cosine-spaced x-stations, producing a flat
design vector of interleaved (x, y) pairs: upper surface leading-to-trailing
edge first, then lower. Length is 4 * points_per_surface (30 stations per
surface -> 120 values, 50 -> 200).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, ParseError


@dataclass(frozen=True)
class AirfoilCoordinates:
    name: str
    points: np.ndarray  # (n, 2) chord-normalized (x, y)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
            raise GeometryError(f"airfoil {self.name!r}: need >= 4 (x, y) points")
        if not np.all(np.isfinite(pts)):
            raise GeometryError(f"airfoil {self.name!r}: non-finite coordinates")
        if pts[:, 0].min() < -0.05 or pts[:, 0].max() > 1.05:
            raise GeometryError(f"airfoil {self.name!r}: x outside [-0.05, 1.05]")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def load_selig(path) -> AirfoilCoordinates:
    """Parse a Selig .dat file: name line, then whitespace-separated x y pairs."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ParseError(f"{path}: empty airfoil file")
    name, coords = lines[0], []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"{path}: expected 'x y' pair, got {ln!r}")
        try:
            coords.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ParseError(f"{path}: non-numeric coordinate in {ln!r}") from None
    return AirfoilCoordinates(name, np.array(coords))


def cosine_stations(n: int) -> np.ndarray:
    """n x-stations on [0, 1] clustered toward both edges."""
    return 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, n)))


def _surface_interp(x: np.ndarray, y: np.ndarray, stations: np.ndarray, label: str):
    if np.any(np.diff(x) < 0):
        raise GeometryError(f"{label} surface x-coordinates are not monotone after split")
    # Collapse duplicate x values so np.interp sees strictly increasing abscissae.
    ux, idx = np.unique(x, return_index=True)
    if ux.size < 2:
        raise GeometryError(f"{label} surface is degenerate")
    # np.interp clamps at the trace ends, so stations just outside the
    # recorded chord range take the edge value instead of extrapolating.
    return np.interp(stations, ux, y[idx])


def resample_airfoil(airfoil: AirfoilCoordinates, points_per_surface: int) -> np.ndarray:
    """Resample a Selig-ordered trace onto fixed cosine-spaced stations.

    Returns a vector of length 4 * points_per_surface: interleaved (x, y) for
    the upper surface leading->trailing edge, then the lower surface.
    """
    if points_per_surface < 2:
        raise ValueError("points_per_surface must be >= 2")
    pts = airfoil.points
    le = int(np.argmin(pts[:, 0]))
    if le < 1 or le > pts.shape[0] - 2:
        raise GeometryError(f"airfoil {airfoil.name!r}: leading edge at trace end, cannot split")
    upper = pts[: le + 1][::-1]  # reverse to leading -> trailing edge
    lower = pts[le:]
    stations = cosine_stations(points_per_surface)
    yu = _surface_interp(upper[:, 0], upper[:, 1], stations, "upper")
    yl = _surface_interp(lower[:, 0], lower[:, 1], stations, "lower")
    out = np.empty(4 * points_per_surface)
    out[0 : 2 * points_per_surface : 2] = stations
    out[1 : 2 * points_per_surface : 2] = yu
    out[2 * points_per_surface :: 2] = stations
    out[2 * points_per_surface + 1 :: 2] = yl
    return out


def airfoil_parameter_names(points_per_surface: int) -> list[str]:
    """Column names matching the resample_airfoil vector layout."""
    names = []
    for surf in ("up", "lo"):
        for i in range(points_per_surface):
            names += [f"{surf}_x{i}", f"{surf}_y{i}"]
    return names
