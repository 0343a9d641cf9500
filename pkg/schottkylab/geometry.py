# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Planar primitives: round circles, and curve pieces stored as three
points (start, interior point, end). A piece is the circular arc
through its three points, or a segment when they are collinear.
Moebius maps send pieces to pieces by mapping the three points.
"""

import math

import numpy as np

from .errors import DegenerateImage

# Central angle below which a piece is treated as a straight segment
FLAT = 1e-7
# Radius below which an image circle is considered degenerate
MIN_RADIUS = 1e-14
# Absolute floor of the distance from a shared vertex that counts as a
# crossing, relative to 1 + |vertex|
SHARED_VERTEX_FLOOR = 1e-12


class Circle(object):
    __slots__ = ('center', 'radius')

    def __init__(self, center, radius):
        radius = float(radius)
        if not (radius > 0 and math.isfinite(radius)):
            raise ValueError('Circle radius must be finite and positive, '
                             'got %r' % radius)
        self.center = complex(center)
        self.radius = radius

    def gap(self, other):
        """Distance between the two closed disks (negative on overlap)."""
        return abs(self.center - other.center) - self.radius - other.radius

    def contains(self, z, margin=0.0):
        return abs(complex(z) - self.center) < self.radius - margin

    def point(self, angle):
        return self.center + self.radius * complex(math.cos(angle),
                                                    math.sin(angle))

    def points(self, n, offset=0.0):
        angles = offset + 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * angles)

    def isclose(self, other, tol=1e-8):
        return (abs(self.center - other.center) <= tol
                and abs(self.radius - other.radius) <= tol * self.radius)

    def to_json(self):
        return {'center': [self.center.real, self.center.imag],
                'radius': self.radius}

    def __eq__(self, other):
        if not isinstance(other, Circle):
            return NotImplemented
        return self.center == other.center and self.radius == other.radius

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.center, self.radius))

    def __repr__(self):
        return 'Circle(%r, %r)' % (self.center, self.radius)


class DegeneratePoint(object):
    """A circle of a domain sequence that has shrunk to a point."""
    __slots__ = ('center',)
    radius = 0.0

    def __init__(self, center):
        self.center = complex(center)

    def to_json(self):
        return {'center': [self.center.real, self.center.imag],
                'radius': 0}

    def __eq__(self, other):
        if not isinstance(other, DegeneratePoint):
            return NotImplemented
        return self.center == other.center

    def __hash__(self):
        return hash(self.center)

    def __repr__(self):
        return 'DegeneratePoint(%r)' % (self.center,)


def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def circumcircles(z1, z2, z3):
    """
    Centers and radii of the circles through the three point arrays.
    Collinear triples yield non-finite centers.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    z3 = np.asarray(z3, dtype=complex)
    with np.errstate(divide='ignore', invalid='ignore'):
        w = (z3 - z1) / (z2 - z1)
        center = z1 + (z2 - z1) * (w - np.abs(w) ** 2) / (w - np.conj(w))
    return center, np.abs(z1 - center)


def circle_through(z1, z2, z3):
    z1, z2, z3 = complex(z1), complex(z2), complex(z3)
    w = (z3 - z1) / (z2 - z1)
    if abs(w.imag) <= 1e-14 * max(1.0, abs(w)):
        raise DegenerateImage('Points %r, %r, %r are collinear'
                              % (z1, z2, z3))
    center, radius = circumcircles(z1, z2, z3)
    radius = float(radius)
    if radius < MIN_RADIUS:
        raise DegenerateImage('Image radius %g underflows' % radius)
    return Circle(complex(center), radius)


# Pieces

class Pieces(object):
    """
    Geometry of an array of pieces: central angles, lengths, circle
    data for the curved ones, bounding boxes.
    """

    def __init__(self, starts, mids, ends):
        self.starts = p0 = np.asarray(starts, dtype=complex)
        self.mids = pm = np.asarray(mids, dtype=complex)
        self.ends = p1 = np.asarray(ends, dtype=complex)

        with np.errstate(divide='ignore', invalid='ignore'):
            alpha = np.abs(np.angle((p1 - pm) / (p0 - pm)))
        self.theta = theta = np.nan_to_num(2 * (np.pi - alpha))
        self.flat = flat = theta <= FLAT
        self.chord = chord = np.abs(p1 - p0)
        half = theta / 2
        with np.errstate(divide='ignore', invalid='ignore'):
            factor = np.where(half > 1e-4, half / np.sin(half),
                              1 + half ** 2 / 6)
        self.lengths = chord * factor

        self.ccw = _cross(pm - p0, p1 - p0) > 0
        center, radius = circumcircles(p0, pm, p1)
        self.center = np.where(flat, 0, center)
        self.radius = np.where(flat, np.inf, radius)

        sag = chord / 2 * np.tan(np.minimum(theta, np.pi) / 4)
        pad = sag + 1e-12 * (1 + np.abs(p0))
        xs = np.stack([p0.real, pm.real, p1.real])
        ys = np.stack([p0.imag, pm.imag, p1.imag])
        self.xmin = xs.min(axis=0) - pad
        self.xmax = xs.max(axis=0) + pad
        self.ymin = ys.min(axis=0) - pad
        self.ymax = ys.max(axis=0) + pad
        big = ~flat & (theta > np.pi)
        if big.any():
            c, r = self.center[big], self.radius[big]
            self.xmin[big] = c.real - r
            self.xmax[big] = c.real + r
            self.ymin[big] = c.imag - r
            self.ymax[big] = c.imag + r

    def __len__(self):
        return len(self.starts)

    def point_at(self, index, u):
        """Points at arc-length fractions ``u`` along the given pieces."""
        index = np.asarray(index)
        u = np.asarray(u, dtype=float)
        p0, p1 = self.starts[index], self.ends[index]
        flat = self.flat[index]
        straight = p0 + u * (p1 - p0)
        c = self.center[index]
        r = np.where(flat, 0, self.radius[index])
        sweep = np.where(self.ccw[index], 1, -1) * self.theta[index]
        curved = c + r * np.exp(1j * (np.angle(p0 - c) + u * sweep))
        return np.where(flat, straight, curved)

    def start_tangents(self):
        p0, pm, p1 = self.starts, self.mids, self.ends
        return (pm - p0) * (p1 - p0) / (p1 - pm)

    def end_tangents(self):
        p0, pm, p1 = self.starts, self.mids, self.ends
        return -(pm - p1) * (p0 - p1) / (p0 - pm)

    def tangent_at(self, index, z):
        """Unnormalized tangent line direction of a piece at point z."""
        if self.flat[index]:
            return self.ends[index] - self.starts[index]
        return 1j * (z - self.center[index])

    def piece(self, index):
        return _Piece(self, index)


class _Piece(object):
    __slots__ = ('p0', 'pm', 'p1', 'flat', 'center', 'radius', 'length')

    def __init__(self, pieces, i):
        self.p0 = complex(pieces.starts[i])
        self.pm = complex(pieces.mids[i])
        self.p1 = complex(pieces.ends[i])
        self.flat = bool(pieces.flat[i])
        self.center = complex(pieces.center[i])
        self.radius = float(pieces.radius[i])
        self.length = float(pieces.lengths[i])


def _on_arc(piece, z, eps=1e-9):
    """z is assumed on the supporting circle of the piece."""
    chord = piece.p1 - piece.p0
    scale = abs(chord) ** 2
    sz = _cross(chord, z - piece.p0) / scale
    sm = _cross(chord, piece.pm - piece.p0) / scale
    if sm > 0:
        return sz >= -eps
    return sz <= eps


def _on_segment(piece, z, eps=1e-9):
    d = piece.p1 - piece.p0
    t = ((z - piece.p0) * d.conjugate()).real / abs(d) ** 2
    return -eps <= t <= 1 + eps


def _contains(piece, z):
    if piece.flat:
        return _on_segment(piece, z)
    return _on_arc(piece, z)


def _line_circle(a, center, radius):
    d = a.p1 - a.p0
    f = a.p0 - center
    A = abs(d) ** 2
    B = 2 * (d.conjugate() * f).real
    C = abs(f) ** 2 - radius ** 2
    disc = B * B - 4 * A * C
    if disc < -1e-12 * max(B * B, abs(4 * A * C), 1e-300):
        return []
    root = math.sqrt(max(disc, 0.0))
    return [a.p0 + (-B + s * root) / (2 * A) * d for s in (1, -1)]


def _circle_circle(c1, r1, c2, r2):
    delta = c2 - c1
    dist = abs(delta)
    if dist > r1 + r2 + 1e-12 * (r1 + r2):
        return []
    if dist < abs(r1 - r2) - 1e-12 * (r1 + r2):
        return []
    a = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    base = c1 + a * delta / dist
    normal = 1j * delta / dist
    return [base + h * normal, base - h * normal]


def _collinear_overlap(a, b):
    d = a.p1 - a.p0
    n2 = abs(d) ** 2
    if abs(_cross(d, b.p0 - a.p0)) > 1e-9 * n2 or \
            abs(_cross(d, b.p1 - a.p0)) > 1e-9 * n2:
        return False, []
    t0 = ((b.p0 - a.p0) * d.conjugate()).real / n2
    t1 = ((b.p1 - a.p0) * d.conjugate()).real / n2
    lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
    if hi - lo > 1e-9:
        return True, []
    if hi - lo >= -1e-9:
        return False, [a.p0 + lo * d]
    return False, []


def _segment_segment(a, b):
    d1 = a.p1 - a.p0
    d2 = b.p1 - b.p0
    denom = _cross(d1, d2)
    if abs(denom) <= 1e-12 * abs(d1) * abs(d2):
        return _collinear_overlap(a, b)
    e = b.p0 - a.p0
    t = _cross(e, d2) / denom
    u = _cross(e, d1) / denom
    if -1e-9 <= t <= 1 + 1e-9 and -1e-9 <= u <= 1 + 1e-9:
        return False, [a.p0 + t * d1]
    return False, []


def _cocircular_overlap(a, b):
    def inside(piece, z):
        if min(abs(z - piece.p0), abs(z - piece.p1)) <= 1e-9 * piece.length:
            return False
        return _on_arc(piece, z, eps=-1e-12)
    return (inside(a, b.pm) or inside(b, a.pm)
            or inside(a, b.p0) or inside(a, b.p1))


def intersections(a, b):
    """
    Intersection of two pieces: (overlap, points) where ``overlap``
    flags a shared stretch of positive length.
    """
    if a.flat and b.flat:
        return _segment_segment(a, b)
    if a.flat or b.flat:
        line, arc = (a, b) if a.flat else (b, a)
        candidates = _line_circle(line, arc.center, arc.radius)
        return False, [z for z in candidates
                       if _on_segment(line, z) and _on_arc(arc, z)]
    scale = max(a.radius, b.radius)
    if (abs(a.center - b.center) <= 1e-9 * scale
            and abs(a.radius - b.radius) <= 1e-9 * scale):
        if _cocircular_overlap(a, b):
            return True, []
        points = [z for z in (a.p0, a.p1)
                  if min(abs(z - b.p0), abs(z - b.p1)) <= 1e-9 * scale]
        return False, points
    candidates = _circle_circle(a.center, a.radius, b.center, b.radius)
    return False, [z for z in candidates if _on_arc(a, z) and _on_arc(b, z)]


def pieces_cross(a, b, shared=None):
    """
    True if the pieces meet anywhere except at the ``shared`` vertex
    (the common endpoint of consecutive pieces).
    """
    overlap, points = intersections(a, b)
    if overlap:
        return True
    if shared is None:
        return bool(points)
    # relative to the pieces, floored at coordinate resolution
    tol = max(1e-7 * min(a.length, b.length),
              SHARED_VERTEX_FLOOR * (1 + abs(shared)))
    return any(abs(z - shared) > tol for z in points)


def distance_to_pieces(points, pieces, chunk=64):
    """Exact distance from each point to the union of the pieces."""
    points = np.asarray(points, dtype=complex).ravel()
    p0 = pieces.starts[None, :]
    pm = pieces.mids[None, :]
    p1 = pieces.ends[None, :]
    flat = pieces.flat[None, :]
    center = pieces.center[None, :]
    radius = np.where(pieces.flat, 0, pieces.radius)[None, :]
    chord = p1 - p0
    chord2 = np.maximum(np.abs(chord) ** 2, 1e-300)
    sm = _cross(chord, pm - p0) / chord2

    out = np.empty(len(points))
    for lo in range(0, len(points), chunk):
        z = points[lo:lo + chunk, None]
        d_flat = np.minimum(_segment_distance(z, p0, pm),
                            _segment_distance(z, pm, p1))
        offset = z - center
        rho = np.abs(offset)
        with np.errstate(divide='ignore', invalid='ignore'):
            q = center + radius * offset / rho
        sz = _cross(chord, q - p0) / chord2
        inside = np.where(sm > 0, sz >= 0, sz <= 0) & (rho > 0)
        d_arc = np.where(inside, np.abs(rho - radius),
                         np.minimum(np.abs(z - p0), np.abs(z - p1)))
        out[lo:lo + chunk] = np.where(flat, d_flat, d_arc).min(axis=1)
    return out


def _segment_distance(z, a, b):
    d = b - a
    n2 = np.maximum(np.abs(d) ** 2, 1e-300)
    t = np.clip(((z - a) * np.conj(d)).real / n2, 0, 1)
    return np.abs(z - (a + t * d))
