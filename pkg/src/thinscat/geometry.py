"""Supporting curves of thin inclusions: evaluation, sampling, segmentation.

A thin inclusion is a tube of half-thickness ``h`` around a supporting
curve in the lower half-plane.  This module provides the curve catalog
(two built-in cubic/quadratic test curves, polylines, isolated points)
together with arclength-based quadrature sampling and the half-wavelength
segmentation used by the coarse factored forward model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

__all__ = [
    "ParametricCurve",
    "CurveSample",
    "eval_curve",
    "arclength",
    "sample_curve",
    "split_into_segments",
]

# Number of nodes in the dense arclength table used for the analytic kinds.
_TABLE_SIZE = 4097

_KINDS = ("Sigma1", "Sigma2", "Polyline", "Points")


@dataclass
class ParametricCurve:
    """A supporting curve definition.

    Parameters
    ----------
    kind : str
        One of ``"Sigma1"``, ``"Sigma2"``, ``"Polyline"``, ``"Points"``.
        The two Sigma kinds are the built-in smooth test curves
        ``z -> (z - 0.2, -0.5 z^2 - 1.5)`` and
        ``z -> (z + 0.2, z^3 + z^2 - 2.5)``.
    params : dict
        Kind-specific data.  ``Polyline`` expects ``{"vertices": [[x1, x2], ...]}``
        with at least two vertices.  ``Points`` expects ``{"points": [[x1, x2], ...]}``
        and optionally per-point ``"weights"`` and tangent ``"angles"`` (radians).
    z_range : tuple of float, optional
        Parameter interval.  Defaults to ``(-0.5, 0.5)`` for the Sigma kinds
        and ``(0.0, 1.0)`` (arclength fraction) for polylines.
    thickness_h : float
        Half-thickness of the thin inclusion around the curve.
    label : str
        Free-form name used in reports.
    """

    kind: str
    params: dict = field(default_factory=dict)
    z_range: tuple | None = None
    thickness_h: float = 0.015
    label: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise GeometryError(
                f"unknown curve kind {self.kind!r}; expected one of {_KINDS}")
        if self.z_range is None:
            if self.kind in ("Sigma1", "Sigma2"):
                self.z_range = (-0.5, 0.5)
            elif self.kind == "Polyline":
                self.z_range = (0.0, 1.0)
        if self.kind == "Polyline":
            verts = np.asarray(self.params.get("vertices", ()), dtype=float)
            if verts.ndim != 2 or verts.shape[0] < 2 or verts.shape[1] != 2:
                raise GeometryError("Polyline needs params['vertices'] with "
                                    "at least two (x1, x2) rows")
        if self.kind == "Points":
            pts = np.asarray(self.params.get("points", ()), dtype=float)
            if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] != 2:
                raise GeometryError("Points needs params['points'] with "
                                    "at least one (x1, x2) row")
        if self.thickness_h <= 0:
            raise GeometryError("thickness_h must be positive")


@dataclass
class CurveSample:
    """One quadrature node on a curve: position, frame, and weight."""

    point: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    weight: float


def _sigma_position(kind, z):
    z = np.asarray(z, dtype=float)
    if kind == "Sigma1":
        return np.stack([z - 0.2, -0.5 * z ** 2 - 1.5], axis=-1)
    return np.stack([z + 0.2, z ** 3 + z ** 2 - 2.5], axis=-1)


def _sigma_velocity(kind, z):
    z = np.asarray(z, dtype=float)
    one = np.ones_like(z)
    if kind == "Sigma1":
        return np.stack([one, -z], axis=-1)
    return np.stack([one, 3.0 * z ** 2 + 2.0 * z], axis=-1)


def _polyline_data(curve):
    verts = np.asarray(curve.params["vertices"], dtype=float)
    seg = np.diff(verts, axis=0)
    seglen = np.hypot(seg[:, 0], seg[:, 1])
    if np.any(seglen == 0.0):
        raise GeometryError("Polyline has a zero-length segment")
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    return verts, seg, seglen, cum


def _frame_from_velocity(vel):
    vel = np.atleast_2d(np.asarray(vel, dtype=float))
    speed = np.hypot(vel[:, 0], vel[:, 1])
    tang = vel / speed[:, None]
    norm = np.stack([-tang[:, 1], tang[:, 0]], axis=-1)
    return tang, norm


def eval_curve(curve, z):
    """Evaluate position, unit tangent, and unit normal at parameter ``z``.

    ``z`` may be a scalar or an array; outputs broadcast accordingly.
    The normal is the tangent rotated by +90 degrees.  ``Points`` curves
    have no continuous parameter and cannot be evaluated.

    Returns
    -------
    (point, tangent, normal) : ndarray triples, shape ``z.shape + (2,)``.
    """
    if curve.kind == "Points":
        raise GeometryError("a Points curve has no continuous parameterization")
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    lo, hi = curve.z_range
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    if np.any(z_arr < lo - tol) or np.any(z_arr > hi + tol):
        raise GeometryError(f"parameter outside z_range [{lo}, {hi}]")
    z_arr = np.clip(z_arr, lo, hi)

    if curve.kind in ("Sigma1", "Sigma2"):
        pos = _sigma_position(curve.kind, z_arr)
        tang, norm = _frame_from_velocity(_sigma_velocity(curve.kind, z_arr))
    else:  # Polyline: parameter is the arclength fraction in z_range
        verts, seg, seglen, cum = _polyline_data(curve)
        frac = (z_arr - lo) / (hi - lo)
        s = frac * cum[-1]
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1)
        local = (s - cum[idx]) / seglen[idx]
        pos = verts[idx] + local[:, None] * seg[idx]
        tang, norm = _frame_from_velocity(seg[idx])

    if scalar:
        return pos[0], tang[0], norm[0]
    return pos, tang, norm


def arclength(curve):
    """Total arclength of the curve.

    Computed exactly for polylines and by dense trapezoidal quadrature of
    the parametric speed for the Sigma kinds.
    """
    if curve.kind == "Points":
        raise GeometryError("a Points curve has no arclength")
    if curve.kind == "Polyline":
        return float(_polyline_data(curve)[3][-1])
    _, cum = _arclength_table(curve)
    return float(cum[-1])


def _arclength_table(curve):
    lo, hi = curve.z_range
    z = np.linspace(lo, hi, _TABLE_SIZE)
    vel = _sigma_velocity(curve.kind, z)
    speed = np.hypot(vel[:, 0], vel[:, 1])
    dz = (hi - lo) / (_TABLE_SIZE - 1)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * dz)])
    return z, cum


def _points_samples(curve):
    pts = np.asarray(curve.params["points"], dtype=float)
    n = pts.shape[0]
    weights = np.asarray(curve.params.get("weights", np.ones(n)), dtype=float)
    angles = np.asarray(curve.params.get("angles", np.zeros(n)), dtype=float)
    if weights.shape != (n,) or angles.shape != (n,):
        raise GeometryError("Points weights/angles must match the point count")
    tang = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    norm = np.stack([-tang[:, 1], tang[:, 0]], axis=-1)
    return [CurveSample(pts[i], tang[i], norm[i], float(weights[i]))
            for i in range(n)]


def sample_curve(curve, spacing):
    """Composite-midpoint quadrature nodes along the curve.

    The curve is divided into ``n = max(1, ceil(L / spacing))`` equal
    arclength pieces; each sample sits at a piece's arclength midpoint and
    carries weight ``L / n``.  A spacing larger than the arclength thus
    yields a single midpoint carrying the full length.  For ``Points``
    curves the stored points are returned as-is with their stored weights,
    independent of ``spacing``.

    Returns
    -------
    list of CurveSample
    """
    if curve.kind == "Points":
        return _points_samples(curve)
    if not spacing > 0:
        raise GeometryError("spacing must be positive")
    length = arclength(curve)
    n = max(1, math.ceil(length / spacing - 1e-12))
    s_mid = (np.arange(n) + 0.5) * (length / n)

    if curve.kind == "Polyline":
        verts, seg, seglen, cum = _polyline_data(curve)
        idx = np.clip(np.searchsorted(cum, s_mid, side="right") - 1, 0, len(seg) - 1)
        local = (s_mid - cum[idx]) / seglen[idx]
        pos = verts[idx] + local[:, None] * seg[idx]
        tang, norm = _frame_from_velocity(seg[idx])
    else:
        z_tab, cum = _arclength_table(curve)
        z_mid = np.interp(s_mid, cum, z_tab)
        pos = _sigma_position(curve.kind, z_mid)
        tang, norm = _frame_from_velocity(_sigma_velocity(curve.kind, z_mid))

    w = length / n
    return [CurveSample(pos[i], tang[i], norm[i], w) for i in range(n)]


def split_into_segments(curve, wavelength):
    """Half-wavelength segmentation used by the coarse factored model.

    Divides the curve into ``M = max(1, ceil(L / (wavelength / 2)))``
    equal-arclength segments and returns their midpoint representatives;
    identical to :func:`sample_curve` at spacing ``wavelength / 2``.
    """
    if not wavelength > 0:
        raise GeometryError("wavelength must be positive")
    return sample_curve(curve, wavelength / 2.0)
