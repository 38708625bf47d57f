"""Curve evaluation, arclength, and half-wavelength segmentation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from thinscat import (GeometryError, ParametricCurve, arclength, eval_curve,
                      sample_curve, split_into_segments)


def _sigma1():
    return ParametricCurve(kind="Sigma1")


def _sigma2():
    return ParametricCurve(kind="Sigma2")


# --------------------------------------------------------------------------
# arclength against independent quadrature

def test_arclength_sigma1_matches_quadrature():
    # speed of (z - 0.2, -0.5 z^2 - 1.5) is sqrt(1 + z^2)
    expected, _ = quad(lambda z: math.hypot(1.0, z), -0.5, 0.5)
    assert arclength(_sigma1()) == pytest.approx(expected, abs=1e-6)
    # closed form for the same integral
    closed = 0.5 * math.sqrt(1.25) + math.asinh(0.5)
    assert arclength(_sigma1()) == pytest.approx(closed, abs=1e-6)


def test_arclength_sigma2_matches_quadrature():
    expected, _ = quad(lambda z: math.hypot(1.0, 3 * z * z + 2 * z),
                       -0.5, 0.5)
    assert arclength(_sigma2()) == pytest.approx(expected, abs=1e-6)


def test_arclength_polyline_is_exact():
    c = ParametricCurve(kind="Polyline",
                        params={"vertices": [[0, -1], [3, -5], [3, -6]]})
    assert arclength(c) == pytest.approx(6.0, abs=1e-14)


def test_arclength_points_rejected():
    c = ParametricCurve(kind="Points", params={"points": [[0.0, -1.0]]})
    with pytest.raises(GeometryError):
        arclength(c)


# --------------------------------------------------------------------------
# pointwise evaluation

def test_eval_sigma1_midpoint():
    pos, tan, nor = eval_curve(_sigma1(), 0.0)
    assert np.allclose(pos, [-0.2, -1.5], atol=1e-14)
    assert np.allclose(tan, [1.0, 0.0], atol=1e-14)
    assert np.allclose(nor, [0.0, 1.0], atol=1e-14)


def test_eval_sigma2_midpoint():
    pos, _, _ = eval_curve(_sigma2(), 0.0)
    assert np.allclose(pos, [0.2, -2.5], atol=1e-14)


def test_eval_vectorized_frames_are_orthonormal():
    z = np.linspace(-0.5, 0.5, 41)
    for curve in (_sigma1(), _sigma2()):
        _, tan, nor = eval_curve(curve, z)
        assert np.allclose(np.linalg.norm(tan, axis=-1), 1.0, atol=1e-12)
        assert np.allclose(np.linalg.norm(nor, axis=-1), 1.0, atol=1e-12)
        assert np.allclose(np.sum(tan * nor, axis=-1), 0.0, atol=1e-12)


def test_eval_outside_range_raises():
    with pytest.raises(GeometryError):
        eval_curve(_sigma1(), 0.51)
    with pytest.raises(GeometryError):
        eval_curve(_sigma1(), np.array([0.0, -0.7]))


def test_eval_points_curve_raises():
    c = ParametricCurve(kind="Points", params={"points": [[0.0, -1.0]]})
    with pytest.raises(GeometryError):
        eval_curve(c, 0.0)


def test_polyline_param_is_arclength_fraction():
    c = ParametricCurve(kind="Polyline",
                        params={"vertices": [[0, -2], [1, -2], [1, -1]]})
    pos, tan, _ = eval_curve(c, 0.25)  # halfway along the first leg
    assert np.allclose(pos, [0.5, -2.0], atol=1e-12)
    assert np.allclose(tan, [1.0, 0.0], atol=1e-12)
    pos, tan, _ = eval_curve(c, 0.75)  # halfway up the second leg
    assert np.allclose(pos, [1.0, -1.5], atol=1e-12)
    assert np.allclose(tan, [0.0, 1.0], atol=1e-12)


# --------------------------------------------------------------------------
# construction errors

def test_bad_curve_definitions():
    with pytest.raises(GeometryError):
        ParametricCurve(kind="Nope")
    with pytest.raises(GeometryError):
        ParametricCurve(kind="Polyline", params={"vertices": [[0, -1]]})
    with pytest.raises(GeometryError):
        ParametricCurve(kind="Points", params={"points": []})
    with pytest.raises(GeometryError):
        ParametricCurve(kind="Sigma1", thickness_h=0.0)


# --------------------------------------------------------------------------
# sampling / segmentation

def test_segment_count_sigma1_at_lambda_04():
    segs = split_into_segments(_sigma1(), 0.4)
    assert len(segs) == 6  # ceil(1.0402... / 0.2)


def test_sample_weights_sum_to_arclength():
    for curve in (_sigma1(), _sigma2()):
        total = arclength(curve)
        for spacing in (0.03, 0.1, 0.25):
            nodes = sample_curve(curve, spacing)
            assert sum(n.weight for n in nodes) == pytest.approx(total,
                                                                 rel=1e-12)
            assert len({round(n.weight, 15) for n in nodes}) == 1


def test_huge_spacing_gives_single_midpoint_node():
    nodes = sample_curve(_sigma1(), 10.0)
    assert len(nodes) == 1
    assert nodes[0].weight == pytest.approx(arclength(_sigma1()), rel=1e-12)
    # the single representative sits at the arclength midpoint
    mid_z = 0.0  # sigma1 speed is even in z, so the midpoint is z = 0
    pos, _, _ = eval_curve(_sigma1(), mid_z)
    assert np.allclose(nodes[0].point, pos, atol=1e-6)


def test_split_equals_sample_at_half_wavelength():
    lam = 0.31
    segs = split_into_segments(_sigma2(), lam)
    nodes = sample_curve(_sigma2(), lam / 2.0)
    assert len(segs) == len(nodes)
    for a, b in zip(segs, nodes):
        assert np.array_equal(a.point, b.point)
        assert np.array_equal(a.tangent, b.tangent)
        assert a.weight == b.weight


def test_points_passthrough_ignores_spacing():
    c = ParametricCurve(kind="Points",
                        params={"points": [[-0.5, -1.5], [0.5, -2.0]],
                                "weights": [1.0, 2.0],
                                "angles": [0.0, math.pi / 2]})
    for spacing in (0.01, 5.0):
        nodes = sample_curve(c, spacing)
        assert len(nodes) == 2
        assert np.allclose(nodes[0].point, [-0.5, -1.5])
        assert nodes[0].weight == 1.0 and nodes[1].weight == 2.0
        assert np.allclose(nodes[1].tangent, [0.0, 1.0], atol=1e-12)
        assert np.allclose(nodes[1].normal, [-1.0, 0.0], atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(spacing=st.floats(min_value=0.01, max_value=2.0),
       kind=st.sampled_from(["Sigma1", "Sigma2"]))
def test_sampling_properties(spacing, kind):
    curve = ParametricCurve(kind=kind)
    total = arclength(curve)
    nodes = sample_curve(curve, spacing)
    n = len(nodes)
    assert n == max(1, math.ceil(total / spacing - 1e-12))
    assert sum(x.weight for x in nodes) == pytest.approx(total, rel=1e-9)
    for x in nodes:
        assert abs(np.linalg.norm(x.tangent) - 1.0) < 1e-9
        assert abs(float(np.dot(x.tangent, x.normal))) < 1e-9
        assert x.point[1] < 0  # stays buried


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(min_value=0.05, max_value=1.5))
def test_split_sample_identity_property(lam):
    segs = split_into_segments(_sigma1(), lam)
    nodes = sample_curve(_sigma1(), lam / 2.0)
    assert len(segs) == len(nodes)
    assert all(np.array_equal(a.point, b.point)
               for a, b in zip(segs, nodes))
