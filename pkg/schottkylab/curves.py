# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Closed curves made of segments and circular arcs, generating curves,
truncated quasi-circles and the Frechet metric.

A generating curve is kept as a necklace: a cyclic order of the 2g
pairing circles, an entry and an exit point on every circle, and one
arc from the exit of each circle to the entry of the next. Generator
i maps the two crossing points of circle i onto those of circle i+g.
The quasi-circle at depth k replaces the part inside circle t by the
image of the rest of the depth k-1 curve under the letter that maps
the exterior of circle inverse(t) into circle t.
"""

import csv
import heapq
import logging
import math

import numpy as np

from .errors import DisjointnessError, OrderingError, PoleError
from .geometry import Pieces, distance_to_pieces, intersections, \
    pieces_cross
from . import moebius
from .schottky import inverse_letter, limit_points, max_disk_radius
from .dimension import poincare_partial_sum

log = logging.getLogger('schottkylab')

__all__ = [
    'LINE_SEGMENT', 'CIRCULAR_ARC', 'PolyCurve', 'GeneratingCurve',
    'CurveSpaceElement', 'LengthEstimate', 'default_generating_curve',
    'build_quasicircle', 'quasicircle_length_estimate', 'length_profile',
    'frechet_distance', 'is_simple', 'is_invariant', 'classify_quasicircle',
    'fundamental_part', 'is_cauchy', 'distance_to_curve',
    ]

LINE_SEGMENT = 'LineSegment'
CIRCULAR_ARC = 'CircularArc'

CSV_HEADER = ['piece_index', 'tag', 'x0', 'y0', 'x1', 'y1', 'cx', 'cy', 'r']

CLOSURE_TOLERANCE = 1e-9
ON_CIRCLE_TOLERANCE = 1e-9
ANGLE_TOLERANCE = 1e-6
FRECHET_SAMPLES = 128

# default generating curve
ANGLE_GRID = 24
STUB_FRACTION = 0.5
STUB_GAP_FRACTION = 0.45
SEPARATION_WEIGHT = 0.25
MAX_COMBINATIONS = 512


class PolyCurve(object):
    """
    A chain of pieces, each stored as (start, interior point, end).
    Closed unless ``closed`` is False, in which case it is an open path.
    """

    def __init__(self, starts, mids, ends, closed=True, depth=None,
                 approximated=False):
        self.starts = np.array(starts, dtype=complex).ravel()
        self.mids = np.array(mids, dtype=complex).ravel()
        self.ends = np.array(ends, dtype=complex).ravel()
        n = len(self.starts)
        if not (len(self.mids) == len(self.ends) == n):
            raise ValueError('Piece arrays differ in length')
        if n == 0:
            raise ValueError('A curve needs at least one piece')
        if closed and n < 3:
            raise ValueError('A closed curve needs at least 3 vertices, '
                             'got %d' % n)
        scale = 1 + np.abs(self.starts).max()
        following = np.roll(self.starts, -1) if closed else self.starts[1:]
        preceding = self.ends if closed else self.ends[:-1]
        gap = np.abs(following - preceding)
        if len(gap) and gap.max() > CLOSURE_TOLERANCE * scale:
            raise ValueError('Consecutive pieces do not join (gap %g)'
                             % gap.max())
        self.closed = closed
        self.depth = depth
        self.approximated = approximated
        self.pieces = Pieces(self.starts, self.mids, self.ends)
        self.length = float(self.pieces.lengths.sum())

    @classmethod
    def from_vertices(cls, vertices, closed=True):
        v = np.asarray(vertices, dtype=complex).ravel()
        ends = np.roll(v, -1) if closed else v[1:]
        starts = v if closed else v[:-1]
        return cls(starts, (starts + ends) / 2, ends, closed=closed)

    @classmethod
    def circle(cls, center, radius, n=4):
        angles = 2 * np.pi * np.arange(n) / n
        step = 2 * np.pi / n
        starts = center + radius * np.exp(1j * angles)
        mids = center + radius * np.exp(1j * (angles + step / 2))
        return cls(starts, mids, np.roll(starts, -1))

    def __len__(self):
        return len(self.starts)

    @property
    def vertices(self):
        return self.starts

    @property
    def tags(self):
        return [LINE_SEGMENT if f else CIRCULAR_ARC for f in self.pieces.flat]

    def reversed(self):
        return PolyCurve(self.ends[::-1], self.mids[::-1], self.starts[::-1],
                         closed=self.closed, depth=self.depth,
                         approximated=self.approximated)

    def transformed(self, f):
        """Moebius image; arcs and segments stay arcs and segments."""
        parts = [moebius.apply_array(f, p)
                 for p in (self.starts, self.mids, self.ends)]
        if not all(np.all(np.isfinite(p)) for p in parts):
            raise PoleError('The pole of %r lies on the curve' % (f,))
        return PolyCurve(*parts, closed=self.closed, depth=self.depth,
                         approximated=self.approximated)

    def subpath(self, indices):
        indices = np.asarray(indices)
        return PolyCurve(self.starts[indices], self.mids[indices],
                         self.ends[indices], closed=False,
                         approximated=self.approximated)

    def sample(self, n, start=0):
        """
        n points evenly spaced by arc length, starting at vertex
        ``start`` (closed curves) or vertex 0.
        """
        lengths = self.pieces.lengths
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        total = cum[-1]
        count = n if self.closed else n - 1
        targets = total * np.arange(n) / max(count, 1)
        if start and self.closed:
            targets = (targets + cum[start]) % total
        index = np.clip(np.searchsorted(cum, targets, side='right') - 1,
                        0, len(lengths) - 1)
        with np.errstate(divide='ignore', invalid='ignore'):
            u = np.where(lengths[index] > 0,
                         (targets - cum[index]) / lengths[index], 0.0)
        return self.pieces.point_at(index, np.clip(u, 0, 1))

    def csv_rows(self):
        p = self.pieces
        for i in range(len(self)):
            x0, x1 = self.starts[i], self.ends[i]
            row = [i, LINE_SEGMENT if p.flat[i] else CIRCULAR_ARC,
                   _num(x0.real), _num(x0.imag), _num(x1.real), _num(x1.imag)]
            if not p.flat[i]:
                c = p.center[i]
                r = p.radius[i] if p.ccw[i] else -p.radius[i]
                row.extend([_num(c.real), _num(c.imag), _num(r)])
            yield row

    def to_csv(self, fileobj):
        writer = csv.writer(fileobj, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        writer.writerows(self.csv_rows())

    @classmethod
    def from_csv(cls, fileobj, closed=True):
        reader = csv.reader(fileobj)
        starts, mids, ends = [], [], []
        for line, row in enumerate(reader, 1):
            if not row or row[0] == 'piece_index' or row[0][:1] == '#':
                continue
            p0 = complex(float(row[2]), float(row[3]))
            p1 = complex(float(row[4]), float(row[5]))
            if row[1] == LINE_SEGMENT:
                pm = (p0 + p1) / 2
            elif row[1] == CIRCULAR_ARC:
                pm = _arc_midpoint(p0, p1, complex(float(row[6]),
                                                   float(row[7])),
                                   float(row[8]))
            else:
                raise ValueError('Unknown piece tag %r on line %d'
                                 % (row[1], line))
            starts.append(p0)
            mids.append(pm)
            ends.append(p1)
        return cls(starts, mids, ends, closed=closed)

    def __repr__(self):
        return '<PolyCurve %d pieces length=%.6g%s>' % (
            len(self), self.length, '' if self.closed else ' open')


def _num(x):
    return repr(float(x))


def _arc_midpoint(p0, p1, center, signed_radius):
    a0 = math.atan2((p0 - center).imag, (p0 - center).real)
    a1 = math.atan2((p1 - center).imag, (p1 - center).real)
    if signed_radius > 0:
        sweep = (a1 - a0) % (2 * math.pi)
    else:
        sweep = -((a0 - a1) % (2 * math.pi))
    angle = a0 + sweep / 2
    return center + abs(signed_radius) * complex(math.cos(angle),
                                                 math.sin(angle))


def _concat(parts):
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))


def _path(curve):
    return curve.starts, curve.mids, curve.ends


def distance_to_curve(points, c):
    return distance_to_pieces(points, c.pieces)


class CurveSpaceElement(object):
    """A closed curve together with a point of it (the witness)."""

    def __init__(self, curve, witness):
        if distance_to_curve([witness], curve)[0] > ON_CIRCLE_TOLERANCE:
            raise ValueError('Witness %r does not lie on the curve'
                             % (witness,))
        self.curve = curve
        self.witness = complex(witness)

    def anchor_in(self, W):
        return abs(self.witness - W.center) <= W.radius


# Generating curves

class GeneratingCurve(object):
    """
    ``order`` is the cyclic order of circle indices (1-based),
    ``crossings`` maps each circle to its (entry, exit) points and
    ``arcs[m]`` runs from the exit of order[m] to the entry of
    order[m + 1].
    """

    def __init__(self, pairing, order, crossings, arcs):
        self.pairing = pairing
        self.order = tuple(order)
        self.crossings = dict(crossings)
        self.arcs = list(arcs)
        self._validate()

    def _validate(self):
        n = len(self.pairing)
        if sorted(self.order) != list(range(1, n + 1)):
            raise ValueError('Order %r is not a permutation of 1..%d'
                             % (self.order, n))
        if len(self.arcs) != n:
            raise ValueError('Expected %d arcs, got %d' % (n, len(self.arcs)))
        for t in self.order:
            circle = self.pairing.circle(t)
            for z in self.crossings[t]:
                if abs(abs(z - circle.center) - circle.radius) > \
                        ON_CIRCLE_TOLERANCE * max(1.0, circle.radius):
                    raise ValueError('Crossing point %r is not on circle %d'
                                     % (z, t))
        for m, arc in enumerate(self.arcs):
            here = self.order[m]
            there = self.order[(m + 1) % n]
            if (arc.starts[0] != self.crossings[here][1]
                    or arc.ends[-1] != self.crossings[there][0]):
                raise ValueError('Arc %d does not join circle %d to %d'
                                 % (m, here, there))
        pieces = Pieces(*_concat([_path(a) for a in self.arcs]))
        for i, circle in enumerate(self.pairing.circles):
            d = distance_to_pieces([circle.center], pieces)[0]
            if d < circle.radius * (1 - 1e-9):
                raise DisjointnessError('An arc enters circle %d' % (i + 1))
        if not is_simple(self.skeleton()):
            raise DisjointnessError('Generating arcs cross each other or '
                                    'the chords through the disks')

    @property
    def length(self):
        return sum(a.length for a in self.arcs)

    def arc_path(self, m):
        return _path(self.arcs[m])

    def skeleton(self):
        """The depth-0 curve: arcs joined by chords through the disks."""
        parts = []
        for m, t in enumerate(self.order):
            entry, exit = self.crossings[t]
            parts.append((np.array([entry]), np.array([(entry + exit) / 2]),
                          np.array([exit])))
            parts.append(self.arc_path(m))
        return PolyCurve(*_concat(parts), depth=0)


def _stub_length(pairing, t):
    circle = pairing.circle(t)
    gaps = [circle.gap(c) for i, c in enumerate(pairing.circles, 1)
            if i != t]
    return min(STUB_FRACTION * circle.radius, STUB_GAP_FRACTION * min(gaps))


def _stub_arc(pairing, stubs, here, exit, there, entry):
    a, b = pairing.circle(here), pairing.circle(there)
    qa = exit + stubs[here] * (exit - a.center) / a.radius
    qb = entry + stubs[there] * (entry - b.center) / b.radius
    vertices = np.array([exit, qa, qb, entry])
    return PolyCurve.from_vertices(vertices, closed=False)


def _facing(circle, p, q, toward_prev, toward_next):
    """Cost of p, q facing the neighbours, best (entry, exit) assignment."""
    ap = np.angle(p - circle.center)
    aq = np.angle(q - circle.center)

    def cost(a, direction):
        return 1 - math.cos(a - direction)

    forward = cost(ap, toward_prev) + cost(aq, toward_next)
    backward = cost(aq, toward_prev) + cost(ap, toward_next)
    separation = SEPARATION_WEIGHT * (1 + math.cos(ap - aq))
    if backward < forward:
        return backward + separation, (q, p)
    return forward + separation, (p, q)


def _cheapest_combinations(costs, limit):
    start = (0,) * len(costs)
    heap = [(sum(c[0] for c in costs), start)]
    seen = set([start])
    while heap and limit > 0:
        total, combo = heapq.heappop(heap)
        yield combo
        limit -= 1
        for k, i in enumerate(combo):
            if i + 1 < len(costs[k]):
                following = combo[:k] + (i + 1,) + combo[k + 1:]
                if following not in seen:
                    seen.add(following)
                    heapq.heappush(heap, (
                        total - costs[k][i] + costs[k][i + 1], following))


def default_generating_curve(G):
    pairing = G.require_pairing()
    g = G.rank
    n = 2 * g
    centers = np.array([c.center for c in pairing.circles])
    angles = np.angle(centers - centers.mean())
    order = sorted(range(1, n + 1), key=lambda t: (angles[t - 1], t))
    position = dict((t, m) for m, t in enumerate(order))

    def toward(t, step):
        other = order[(position[t] + step) % n]
        return np.angle(centers[other - 1] - centers[t - 1])

    grid = 2 * np.pi * np.arange(ANGLE_GRID) / ANGLE_GRID
    candidates = []
    for i in range(1, g + 1):
        source, target = pairing.circle(i), pairing.circle(i + g)
        f = G.generators[i - 1]
        options = []
        for a in range(ANGLE_GRID):
            for b in range(a + 1, ANGLE_GRID):
                p, q = source.point(grid[a]), source.point(grid[b])
                cost_i, at_i = _facing(source, p, q,
                                       toward(i, -1), toward(i, 1))
                cost_j, at_j = _facing(target, moebius.apply(f, p),
                                       moebius.apply(f, q),
                                       toward(i + g, -1), toward(i + g, 1))
                options.append((cost_i + cost_j, a, b, at_i, at_j))
        options.sort(key=lambda o: o[:3])
        candidates.append(options)

    stubs = dict((t, _stub_length(pairing, t)) for t in range(1, n + 1))
    costs = [[o[0] for o in options] for options in candidates]
    tried = 0
    for combo in _cheapest_combinations(costs, MAX_COMBINATIONS):
        tried += 1
        crossings = {}
        for i, k in enumerate(combo, 1):
            _, _, _, at_i, at_j = candidates[i - 1][k]
            crossings[i] = at_i
            crossings[i + g] = at_j
        arcs = [_stub_arc(pairing, stubs, order[m], crossings[order[m]][1],
                          order[(m + 1) % n],
                          crossings[order[(m + 1) % n]][0])
                for m in range(n)]
        if not _clear_of_disks(pairing, stubs, arcs):
            continue
        try:
            zeta = GeneratingCurve(pairing, order, crossings, arcs)
        except DisjointnessError:
            continue
        log.debug('generating curve found after %d candidates', tried)
        return zeta
    raise DisjointnessError('No disjoint generating curve among %d candidates'
                            % tried)


def _clear_of_disks(pairing, stubs, arcs):
    # middle pieces keep half a stub of clearance from every disk
    middle = Pieces(*_concat([(a.starts[1:2], a.mids[1:2], a.ends[1:2])
                              for a in arcs]))
    centers = [c.center for c in pairing.circles]
    distances = distance_to_pieces(centers, middle)
    for t, (circle, d) in enumerate(zip(pairing.circles, distances), 1):
        if d < circle.radius + 0.5 * stubs[t]:
            return False
    return True


# Quasi-circles

class _Refinement(object):
    def __init__(self, G, zeta):
        self.G = G
        self.zeta = zeta
        self.memo = {}

    def interior(self, t, k):
        """Path inside circle t from its entry to its exit point."""
        key = (t, k)
        if key in self.memo:
            return self.memo[key]
        entry, exit = self.zeta.crossings[t]
        if k == 0:
            path = (np.array([entry]), np.array([(entry + exit) / 2]),
                    np.array([exit]))
        else:
            u = inverse_letter(t, self.G.rank)
            f = self.G.letter(u)
            starts, mids, ends = [moebius.apply_array(f, p)
                                  for p in self.exterior(u, k - 1)]
            tol = 1e-8 * max(1.0, self.zeta.pairing.circle(t).radius)
            if abs(starts[0] - entry) <= tol and abs(ends[-1] - exit) <= tol:
                pass
            elif abs(starts[0] - exit) <= tol and abs(ends[-1] - entry) <= tol:
                starts, mids, ends = ends[::-1], mids[::-1], starts[::-1]
            else:
                raise OrderingError(
                    'Image of the exterior of circle %d does not join the '
                    'crossing points of circle %d' % (u, t))
            starts = starts.copy()
            ends = ends.copy()
            starts[0] = entry
            ends[-1] = exit
            path = (starts, mids.copy(), ends)
        self.memo[key] = path
        return path

    def exterior(self, u, k):
        """Path from the exit of circle u around to its entry."""
        order = self.zeta.order
        n = len(order)
        m = order.index(u)
        parts = [self.zeta.arc_path(m)]
        for step in range(1, n):
            index = (m + step) % n
            parts.append(self.interior(order[index], k))
            parts.append(self.zeta.arc_path(index))
        return _concat(parts)


def build_quasicircle(G, zeta, depth):
    if depth < 0:
        raise ValueError('Depth must be >= 0, got %r' % depth)
    refinement = _Refinement(G, zeta)
    parts = []
    for m, t in enumerate(zeta.order):
        parts.append(refinement.interior(t, depth))
        parts.append(zeta.arc_path(m))
    curve = PolyCurve(*_concat(parts), depth=depth)
    log.debug('quasi-circle depth %d: %d pieces, length %.6g',
              depth, len(curve), curve.length)
    return curve


class LengthEstimate(object):
    def __init__(self, estimate, direct, depth):
        self.estimate = estimate
        self.direct = direct
        self.depth = depth

    @property
    def ratio(self):
        return self.direct / self.estimate

    def to_json(self):
        return {'depth': self.depth, 'estimate': self.estimate,
                'direct': self.direct}


def quasicircle_length_estimate(G, zeta, depth, s=1.0):
    series = 0.0
    if depth > 0:
        series = poincare_partial_sum(G, s, depth).partial_sum
    estimate = zeta.length * (1 + series)
    direct = build_quasicircle(G, zeta, depth).length
    return LengthEstimate(estimate, direct, depth)


def length_profile(G, zeta, depths):
    """Direct lengths, their increments and successive increment ratios."""
    depths = sorted(depths)
    lengths = np.array([build_quasicircle(G, zeta, k).length for k in depths])
    increments = np.diff(lengths)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = increments[1:] / increments[:-1]
    return {'depths': depths, 'lengths': lengths, 'increments': increments,
            'ratios': ratios}


# Predicates

def is_simple(c):
    """Sweep over bounding boxes in x, exact tests on overlapping pairs."""
    p = c.pieces
    n = len(p)
    order = np.argsort(p.xmin, kind='stable')
    active = []
    for i in order:
        active = [j for j in active if p.xmax[j] >= p.xmin[i]]
        for j in active:
            if p.ymax[j] < p.ymin[i] or p.ymin[j] > p.ymax[i]:
                continue
            lo, hi = min(i, j), max(i, j)
            if hi - lo == 1:
                shared = p.ends[lo]
            elif c.closed and lo == 0 and hi == n - 1:
                shared = p.ends[hi]
            else:
                shared = None
            if pieces_cross(p.piece(i), p.piece(j), shared):
                return False
        active.append(i)
    return True


def is_invariant(G, c, tol=None, samples=256):
    if tol is None:
        if c.depth is None:
            raise ValueError('Curve has no depth; pass tol explicitly')
        tol = 2 * max_disk_radius(G, max(c.depth, 1))
    index = np.linspace(0, len(c) - 1, samples).astype(int)
    points = c.starts[index]
    for f in G.generators:
        images = moebius.apply_array(f, points)
        images = images[np.isfinite(images)]
        if distance_to_curve(images, c).max() > tol:
            return False
    limit = limit_points(G, 4)
    return bool(distance_to_curve(limit, c).max() <= tol)


def _on_circle(points, circle):
    return np.abs(np.abs(points - circle.center) - circle.radius) <= \
        ON_CIRCLE_TOLERANCE * max(1.0, circle.radius)


def _is_parallel(c, pairing):
    p = c.pieces
    for circle in pairing.circles:
        on = (_on_circle(p.starts, circle) & _on_circle(p.mids, circle)
              & _on_circle(p.ends, circle) & ~p.flat)
        if on.any():
            return True
    return False


def _half_circles(circle):
    c, r = circle.center, circle.radius
    return Pieces([c + r, c - r], [c + 1j * r, c - 1j * r], [c - r, c + r])


def _crossings_orthogonal(c, pairing):
    p = c.pieces
    for circle in pairing.circles:
        center, r = circle.center, circle.radius
        dx = np.maximum(0, np.maximum(p.xmin - center.real,
                                      center.real - p.xmax))
        dy = np.maximum(0, np.maximum(p.ymin - center.imag,
                                      center.imag - p.ymax))
        near = np.hypot(dx, dy) <= r * (1 + 1e-9)
        fx = np.maximum(np.abs(p.xmin - center.real),
                        np.abs(p.xmax - center.real))
        fy = np.maximum(np.abs(p.ymin - center.imag),
                        np.abs(p.ymax - center.imag))
        reaches = np.hypot(fx, fy) >= r * (1 - 1e-9)
        halves = _half_circles(circle)
        for i in np.nonzero(near & reaches)[0]:
            piece = p.piece(i)
            for h in range(2):
                overlap, points = intersections(piece, halves.piece(h))
                if overlap:
                    return False
                for z in points:
                    t1 = p.tangent_at(i, z)
                    t2 = 1j * (z - center)
                    cos = abs((t1 * np.conj(t2)).real) / (abs(t1) * abs(t2))
                    if cos > ANGLE_TOLERANCE:
                        return False
    return True


def _right_angled(c):
    p = c.pieces
    incoming = p.end_tangents()
    outgoing = np.roll(p.start_tangents(), -1)
    if not c.closed:
        incoming, outgoing = incoming[:-1], outgoing[:-1]
    angles = np.abs(np.angle(outgoing / incoming))
    return bool(np.all(np.abs(angles - np.pi / 2) <= ANGLE_TOLERANCE))


def classify_quasicircle(G, c, pairing=None):
    if pairing is None:
        pairing = G.require_pairing()
    parallel = _is_parallel(c, pairing)
    return {
        'linear': not c.approximated,
        'right_angled': _right_angled(c),
        'transverse': not parallel and _crossings_orthogonal(c, pairing),
        'parallel': parallel,
        }


def fundamental_part(c, pairing):
    """Maximal runs of pieces outside every closed pairing disk."""
    p = c.pieces
    outside = np.ones(len(p), dtype=bool)
    for circle in pairing.circles:
        outside &= np.abs(p.mids - circle.center) > circle.radius
    if outside.all():
        return [c]
    n = len(p)
    # start the scan right after a piece inside some disk
    first = int(np.nonzero(~outside)[0][0]) + 1 if c.closed else 0
    runs, current = [], []
    for step in range(n):
        i = (first + step) % n
        if outside[i]:
            current.append(i)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)
    return [c.subpath(run) for run in runs]


# Frechet metric

def _frechet_tables(D):
    """Discrete Frechet values of a (k, rows, cols) stack of distances."""
    rows, cols = D.shape[1], D.shape[2]
    F = np.empty_like(D)
    F[:, 0, 0] = D[:, 0, 0]
    for diag in range(1, rows + cols - 1):
        i = np.arange(max(0, diag - cols + 1), min(rows, diag + 1))
        j = diag - i
        best = np.full((D.shape[0], len(i)), np.inf)
        up = i > 0
        left = j > 0
        both = up & left
        best[:, up] = F[:, i[up] - 1, j[up]]
        best[:, left] = np.minimum(best[:, left], F[:, i[left], j[left] - 1])
        best[:, both] = np.minimum(best[:, both],
                                   F[:, i[both] - 1, j[both] - 1])
        F[:, i, j] = np.maximum(D[:, i, j], best)
    return F[:, -1, -1]


def _cyclic_frechet(P, Q):
    """
    Discrete Frechet distance between the closed sample cycles P and Q,
    minimized over every start vertex of Q. A coupling starting at
    Q[s] costs at least |P[0] - Q[s]|, so only starts within the value
    of the nearest start are tried.
    """
    m = len(Q)
    P = np.concatenate([P, P[:1]])
    D = np.abs(P[:, None] - Q[None, :])

    def tables(starts):
        index = (starts[:, None] + np.arange(m + 1)[None, :]) % m
        return D[:, index].transpose(1, 0, 2)

    nearest = np.argmin(D[0])
    bound = _frechet_tables(tables(np.array([nearest])))[0]
    starts = np.nonzero(D[0] <= bound)[0]
    starts = starts[starts != nearest]
    if not len(starts):
        return float(bound)
    return float(min(bound, _frechet_tables(tables(starts)).min()))


def _anchor(c):
    """Index of the lexicographically smallest vertex (real, then imag)."""
    v = c.starts
    return int(np.lexsort((v.imag, v.real))[0])


def frechet_distance(c1, c2, samples=FRECHET_SAMPLES, length_term=True):
    """
    Frechet distance over cyclic reparameterizations in both
    directions, plus |length(c1) - length(c2)| unless ``length_term``
    is False. Samples start at each curve's smallest vertex, so
    a curve and any rotation or reversal of its vertex cycle sample to
    the same points.
    """
    P = c1.sample(samples, _anchor(c1))
    Q = c2.sample(samples, _anchor(c2))
    # both orders, so the value does not depend on which curve comes first
    d = min(_cyclic_frechet(P, Q), _cyclic_frechet(P, Q[::-1]),
            _cyclic_frechet(Q, P), _cyclic_frechet(Q, P[::-1]))
    if length_term:
        d += abs(c1.length - c2.length)
    return d


def is_cauchy(curves, tol, samples=FRECHET_SAMPLES):
    """
    Successive distances shrink (each ratio below one) and the last
    one is below ``tol``.
    """
    if len(curves) < 3:
        raise ValueError('Need at least 3 curves, got %d' % len(curves))
    distances = [frechet_distance(a, b, samples)
                 for a, b in zip(curves, curves[1:])]
    log.debug('successive Frechet distances %s', distances)
    shrinking = all(b < a for a, b in zip(distances, distances[1:]))
    return shrinking and distances[-1] < tol
