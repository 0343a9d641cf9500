import math

import numpy as np
from nose.tools import eq_ as eq
from numpy.testing import assert_allclose

from schottkylab.errors import DegenerateImage
from schottkylab.geometry import Circle, DegeneratePoint, Pieces, \
    circle_through, distance_to_pieces, intersections, pieces_cross

from .util import assert_raises

# upper unit half circle from 1 to -1, and a segment on the real axis
ARC = Pieces([1], [1j], [-1])
SEGMENT = Pieces([0], [1], [2])


def test_circle_needs_positive_radius():
    assert_raises(ValueError, Circle, 0, 0)
    assert_raises(ValueError, Circle, 0, -1)
    assert_raises(ValueError, Circle, 0, float('inf'))


def test_circle_gap_and_contains():
    a, b = Circle(0, 1), Circle(3, 1)
    eq(a.gap(b), 1)
    eq(b.gap(a), 1)
    assert Circle(0, 2).gap(b) < 0
    assert a.contains(0.5j)
    assert not a.contains(1.5)
    assert not a.contains(0.95, margin=0.1)


def test_circle_points():
    c = Circle(1 + 1j, 2)
    points = c.points(12, offset=0.3)
    assert_allclose(np.abs(points - c.center), 2)
    assert_allclose(c.point(0), 3 + 1j)


def test_circle_json():
    eq(Circle(1 - 2j, 0.5).to_json(), {'center': [1, -2], 'radius': 0.5})
    eq(DegeneratePoint(3j).to_json(), {'center': [0, 3], 'radius': 0})


def test_circle_through():
    c = circle_through(1, 1j, -1)
    assert_allclose(c.center, 0, atol=1e-14)
    assert_allclose(c.radius, 1)
    assert_raises(DegenerateImage, circle_through, 0, 1, 2)


def test_arc_piece():
    assert_allclose(ARC.theta, [math.pi])
    assert_allclose(ARC.lengths, [math.pi])
    assert not ARC.flat[0]
    assert ARC.ccw[0]
    assert_allclose(ARC.center, [0], atol=1e-14)
    assert_allclose(ARC.radius, [1])
    assert_allclose(ARC.point_at([0], [0.5]), [1j], atol=1e-14)
    assert_allclose(ARC.point_at([0], [1.0]), [-1], atol=1e-14)


def test_segment_piece():
    assert SEGMENT.flat[0]
    assert_allclose(SEGMENT.lengths, [2])
    assert_allclose(SEGMENT.point_at([0], [0.25]), [0.5])


def test_bounding_boxes_cover_arc():
    assert ARC.ymax[0] >= 1
    assert ARC.ymin[0] <= 0
    assert ARC.xmin[0] <= -1 and ARC.xmax[0] >= 1


def test_tangents():
    assert_allclose(ARC.start_tangents() / abs(ARC.start_tangents()), [1j],
                    atol=1e-12)
    assert_allclose(ARC.end_tangents() / abs(ARC.end_tangents()), [-1j],
                    atol=1e-12)


def test_segment_intersection():
    a = Pieces([-1 - 1j], [0], [1 + 1j]).piece(0)
    b = Pieces([-1 + 1j], [0], [1 - 1j]).piece(0)
    overlap, points = intersections(a, b)
    assert not overlap
    eq(len(points), 1)
    assert_allclose(points[0], 0, atol=1e-14)


def test_collinear_overlap():
    a = Pieces([0], [1], [2]).piece(0)
    b = Pieces([1], [2], [3]).piece(0)
    overlap, _ = intersections(a, b)
    assert overlap


def test_segment_meets_arc():
    line = Pieces([-2 + 0.5j], [0.5j], [2 + 0.5j]).piece(0)
    overlap, points = intersections(line, ARC.piece(0))
    assert not overlap
    eq(len(points), 2)
    assert_allclose(sorted(p.real for p in points),
                    [-math.sqrt(0.75), math.sqrt(0.75)])


def test_arc_misses_reflected_arc():
    lower = Pieces([1 - 0.5j], [-0.5j - 1j], [-1 - 0.5j]).piece(0)
    overlap, points = intersections(ARC.piece(0), lower)
    assert not overlap
    eq(points, [])


def test_shared_vertex_is_not_a_crossing():
    first = Pieces([0], [0.5], [1]).piece(0)
    second = Pieces([1], [1 + 0.5j], [1 + 1j]).piece(0)
    assert not pieces_cross(first, second, shared=1)
    assert pieces_cross(first, second)


def test_distance_to_pieces():
    d = distance_to_pieces([0, 2j, -2j, 0.5j], ARC)
    assert_allclose(d, [1, 1, math.sqrt(5), 0.5])
    d = distance_to_pieces([1 + 2j, 3], SEGMENT)
    assert_allclose(d, [2, 1])
