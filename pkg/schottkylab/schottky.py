# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Schottky groups: generators, circle pairings, reduced words, nested
disk covers and limit-set samples.

Letters of a rank-g group are 1..2g. Letter i <= g is the generator
gamma_i and letter i+g is its inverse. Letter j maps the exterior of
pairing circle j onto the interior of circle inverse_letter(j).
"""

import cmath
import logging
import math

import numpy as np

from .errors import (DegenerateImage, GroupParseError, NonLoxodromicError,
                     NoPairingError, NotReducedError)
from .geometry import MIN_RADIUS, Circle, DegeneratePoint, circle_through, \
    circumcircles
from . import moebius
from .moebius import INFINITY, MoebiusMap

log = logging.getLogger('schottkylab')

__all__ = [
    'Circle', 'DegeneratePoint', 'CirclePairing', 'SchottkyGroup',
    'inverse_letter', 'is_reduced', 'reduce_word', 'inverse_word',
    'count_reduced_words', 'enumerate_reduced_words', 'word_to_map',
    'is_admissible_for_disk', 'image_circle', 'nested_disk', 'word_shells',
    'depth_disks', 'max_disk_radius', 'LimitSetSample', 'sample_limit_set',
    'limit_points', 'ping_pong_check', 'pairing_generator',
    'from_circle_pairing', 'group_from_json',
    'rank_one_group', 'cyclic_group', 'four_circle_group', 'fuchsian_group',
    'near_tangent_grid', 'random_circle_pairing', 'random_group',
    ]


# Words

def inverse_letter(i, g):
    return (i + g - 1) % (2 * g) + 1


def is_reduced(w, g):
    return all(b != inverse_letter(a, g) for a, b in zip(w, w[1:]))


def reduce_word(w, g):
    out = []
    for letter in w:
        if out and out[-1] == inverse_letter(letter, g):
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def inverse_word(w, g):
    return tuple(inverse_letter(i, g) for i in reversed(w))


def count_reduced_words(g, k):
    if k == 0:
        return 1
    return 2 * g * (2 * g - 1) ** (k - 1)


def enumerate_reduced_words(g, k):
    """Reduced words of length k in lexicographic order, lazily."""
    if g < 1 or k < 0:
        raise ValueError('Need g >= 1 and k >= 0, got g=%r, k=%r' % (g, k))

    def extend(prefix):
        if len(prefix) == k:
            yield prefix
            return
        forbidden = inverse_letter(prefix[-1], g) if prefix else None
        for letter in range(1, 2 * g + 1):
            if letter != forbidden:
                for word in extend(prefix + (letter,)):
                    yield word

    return extend(())


def is_admissible_for_disk(w, i):
    return not w or w[-1] != i


# Pairings and groups

class CirclePairing(object):
    """2g circles; circle i is paired with circle i+g (1-based)."""

    def __init__(self, circles):
        circles = tuple(circles)
        if not circles or len(circles) % 2:
            raise ValueError('A pairing needs an even, non-zero number of '
                             'circles, got %d' % len(circles))
        for c in circles:
            if not isinstance(c, Circle):
                raise TypeError('Expected Circle, got %r' % (c,))
        self.circles = circles
        self.rank = len(circles) // 2

    def __len__(self):
        return len(self.circles)

    def __iter__(self):
        return iter(self.circles)

    def circle(self, i):
        return self.circles[i - 1]

    def gaps(self):
        """Pairwise gaps as {(i, j): gap}, 1-based, i < j."""
        result = {}
        n = len(self.circles)
        for i in range(n):
            for j in range(i + 1, n):
                result[(i + 1, j + 1)] = self.circles[i].gap(self.circles[j])
        return result

    def margin(self):
        return min(self.gaps().values())

    def transformed(self, u):
        """
        Image pairing under u, or None when the pole of u lies in a
        closed disk (the image disk would contain infinity).
        """
        circles = []
        for c in self.circles:
            if u.c != 0 and abs(-u.d / u.c - c.center) <= c.radius:
                return None
            circles.append(image_circle(u, c))
        return CirclePairing(circles)

    def to_json(self):
        return [c.to_json() for c in self.circles]

    def __repr__(self):
        return 'CirclePairing(%r)' % (list(self.circles),)


class SchottkyGroup(object):
    def __init__(self, generators, pairing=None, verify=True):
        generators = tuple(generators)
        if not generators:
            raise ValueError('A Schottky group needs at least one generator')
        for i, f in enumerate(generators):
            kind = moebius.classify(f)
            if kind != moebius.LOXODROMIC:
                raise NonLoxodromicError(
                    'Generator %d is %s, not loxodromic' % (i + 1, kind))
        if pairing is not None:
            if not isinstance(pairing, CirclePairing):
                pairing = CirclePairing(pairing)
            if pairing.rank != len(generators):
                raise ValueError(
                    'Pairing has %d circles for %d generators'
                    % (len(pairing), len(generators)))
            if verify:
                from .classicality import verify_classical_domain
                verify_classical_domain(generators, pairing)
        self.generators = generators
        self.pairing = pairing
        self._letters = None

    @property
    def rank(self):
        return len(self.generators)

    def letter(self, j):
        g = self.rank
        if not 1 <= j <= 2 * g:
            raise ValueError('Letter %r out of range 1..%d' % (j, 2 * g))
        if j <= g:
            return self.generators[j - 1]
        return moebius.inverse(self.generators[j - g - 1])

    def letter_maps(self):
        if self._letters is None:
            self._letters = [self.letter(j) for j in range(1, 2 * self.rank + 1)]
        return self._letters

    def letter_matrices(self):
        return moebius.stack(self.letter_maps())

    def require_pairing(self):
        if self.pairing is None:
            raise NoPairingError('Group has no circle pairing')
        return self.pairing

    def conjugated(self, u):
        generators = [moebius.conjugate(f, u) for f in self.generators]
        pairing = None
        if self.pairing is not None:
            pairing = self.pairing.transformed(u)
        return SchottkyGroup(generators, pairing, verify=False)

    def to_json(self):
        data = {
            'rank': self.rank,
            'generators': [moebius.to_json(f) for f in self.generators],
            }
        if self.pairing is not None:
            data['circles'] = self.pairing.to_json()
        return data

    def __repr__(self):
        return '<SchottkyGroup rank=%d%s>' % (
            self.rank, ' with pairing' if self.pairing else '')


def word_to_map(G, w):
    w = tuple(w)
    if not is_reduced(w, G.rank):
        raise NotReducedError('Word %r is not reduced' % (w,))
    result = MoebiusMap.identity()
    for letter in w:
        result = moebius.compose(result, G.letter(letter))
    return result


def image_circle(f, circle):
    points = [moebius.apply(f, circle.point(t))
              for t in (0, math.pi / 2, math.pi)]
    if any(p is INFINITY for p in points):
        raise DegenerateImage('Circle %r passes through the pole of %r'
                              % (circle, f))
    return circle_through(*points)


def nested_disk(G, w, i):
    """Image of pairing circle i under word_to_map(w)."""
    pairing = G.require_pairing()
    w = tuple(w)
    if not is_admissible_for_disk(w, i):
        raise ValueError('Word %r is not admissible for disk %d' % (w, i))
    if not w:
        return pairing.circle(i)
    return image_circle(word_to_map(G, w), pairing.circle(i))


# Vectorized covers

def _extend(G, words, mats):
    g = G.rank
    letters = np.arange(1, 2 * g + 1)
    L = G.letter_matrices()
    last = words[:, -1]
    allowed = letters[None, :] != ((last + g - 1) % (2 * g) + 1)[:, None]
    products = np.matmul(mats[:, None], L[None, :])
    rows, cols = np.nonzero(allowed)
    new_words = np.concatenate(
        [words[rows], letters[cols][:, None]], axis=1)
    return new_words, products[rows, cols]


def word_shells(G, depth):
    """
    Yield (words, matrices) for every word length 1..depth; words is an
    (N, k) integer array in lexicographic order, matrices (N, 2, 2).
    """
    if depth < 1:
        return
    g = G.rank
    words = np.arange(1, 2 * g + 1, dtype=np.int16)[:, None]
    mats = G.letter_matrices()
    yield words, mats
    for _ in range(depth - 1):
        words, mats = _extend(G, words, mats)
        words = words.astype(np.int16)
        yield words, mats


def _apply_stack(mats, z):
    a, b = mats[..., 0, 0], mats[..., 0, 1]
    c, d = mats[..., 1, 0], mats[..., 1, 1]
    with np.errstate(divide='ignore', invalid='ignore'):
        return (a * z + b) / (c * z + d)


def depth_disks(G, k):
    """
    The depth-k cover: one disk per reduced word u of length k, the
    image of circle inverse(u_k) under u_1...u_{k-1}.

    Returns (words, centers, radii) in lexicographic word order.
    """
    pairing = G.require_pairing()
    if k < 1:
        raise ValueError('Depth must be >= 1')
    g = G.rank
    centers = np.array([c.center for c in pairing.circles])
    radii = np.array([c.radius for c in pairing.circles])
    letters = np.arange(1, 2 * g + 1)
    targets = (letters + g - 1) % (2 * g)

    if k == 1:
        return letters[:, None].astype(np.int16), centers[targets], \
            radii[targets]

    prefixes, mats = None, None
    for prefixes, mats in word_shells(G, k - 1):
        pass
    last = prefixes[:, -1]
    allowed = letters[None, :] != ((last + g - 1) % (2 * g) + 1)[:, None]
    rows, cols = np.nonzero(allowed)
    t = targets[cols]
    m = mats[rows]
    z1 = _apply_stack(m, centers[t] + radii[t])
    z2 = _apply_stack(m, centers[t] + 1j * radii[t])
    z3 = _apply_stack(m, centers[t] - radii[t])
    center, radius = circumcircles(z1, z2, z3)
    if not np.all(np.isfinite(center)) or radius.min() < MIN_RADIUS:
        raise DegenerateImage(
            'Depth-%d cover has a degenerate disk (min radius %g)'
            % (k, np.nanmin(radius)))
    words = np.concatenate([prefixes[rows], letters[cols][:, None]], axis=1)
    return words.astype(np.int16), center, radius


def max_disk_radius(G, k):
    return float(depth_disks(G, k)[2].max())


class LimitSetSample(object):
    """
    Limit-set sample points with the words that produced them, one
    point per word. ``method`` is 'disks' (centers of the depth-k
    cover) or 'fixed_points' (attracting fixed points of depth-k
    words); a fixed point at infinity is kept as a non-finite entry of
    ``points`` and reads back as INFINITY from ``values()``.
    """

    def __init__(self, points, words, method):
        self.points = points
        self.words = words
        self.method = method

    def __len__(self):
        return len(self.points)

    @property
    def infinite(self):
        return ~np.isfinite(self.points)

    @property
    def at_infinity(self):
        return int(self.infinite.sum())

    def finite_points(self):
        return self.points[~self.infinite]

    def values(self):
        return [INFINITY if not np.isfinite(z) else complex(z)
                for z in self.points]

    def word_labels(self):
        return ['.'.join(str(int(x)) for x in w) for w in self.words]


def _attracting_fixed_points(mats):
    a, b = mats[:, 0, 0], mats[:, 0, 1]
    c, d = mats[:, 1, 0], mats[:, 1, 1]
    A, B, C = c, d - a, -b
    root = np.sqrt(B * B - 4 * A * C)
    root = np.where((np.conj(B) * root).real < 0, -root, root)
    q = -(B + root) / 2
    with np.errstate(divide='ignore', invalid='ignore'):
        z1 = np.where(A != 0, q / A, np.inf)
        z2 = np.where(q != 0, C / q, 0)
        s1 = np.where(A != 0, np.abs(c * z1 + d), 1 / np.abs(d))
    s2 = np.abs(c * z2 + d)
    return np.where(s1 > s2, z1, z2)


def sample_limit_set(G, k):
    if k < 1:
        raise ValueError('Depth must be >= 1')
    if G.pairing is not None:
        words, centers, _ = depth_disks(G, k)
        return LimitSetSample(centers, words, 'disks')
    words, mats = None, None
    for words, mats in word_shells(G, k):
        pass
    points = _attracting_fixed_points(mats)
    points = np.where(np.isfinite(points), points, complex(np.inf, 0))
    sample = LimitSetSample(points, words, 'fixed_points')
    if sample.at_infinity:
        log.debug('%d limit-set samples at infinity', sample.at_infinity)
    return sample


def limit_points(G, k):
    """Finite attracting fixed points of every reduced word of length k."""
    mats = None
    for _, mats in word_shells(G, k):
        pass
    points = _attracting_fixed_points(mats)
    return points[np.isfinite(points)]


def ping_pong_check(G, samples=64):
    pairing = G.require_pairing()
    g = G.rank
    for i in range(1, g + 1):
        source = pairing.circle(i)
        target = pairing.circle(i + g)
        f = G.generators[i - 1]
        ring = source.center + 1.001 * source.radius * np.exp(
            2j * np.pi * np.arange(samples) / samples)
        images = moebius.apply_array(f, ring)
        if not np.all(np.abs(images - target.center) < target.radius):
            return False
    return True


# Constructors and fixtures

def pairing_generator(circle_a, circle_b, twist=1):
    """
    z -> c_b + twist * r_a * r_b / (z - c_a): maps circle a onto circle
    b and the exterior of a into the interior of b.
    """
    ca, cb = circle_a.center, circle_b.center
    t = complex(twist) * circle_a.radius * circle_b.radius
    return MoebiusMap(cb, t - ca * cb, 1, -ca)


def from_circle_pairing(circles, twists=None, verify=True):
    pairing = CirclePairing(circles)
    g = pairing.rank
    if twists is None:
        twists = [1] * g
    generators = [pairing_generator(pairing.circle(i), pairing.circle(i + g),
                                    twists[i - 1])
                  for i in range(1, g + 1)]
    return SchottkyGroup(generators, pairing, verify=verify)


def rank_one_group():
    return from_circle_pairing([Circle(-3, 1), Circle(3, 1)])


def cyclic_group():
    """<z -> 4z>, no pairing (its disks would contain infinity)."""
    return SchottkyGroup([MoebiusMap(2, 0, 0, 0.5)])


def four_circle_group(radius=1.0, verify=True):
    circles = [Circle(-3, radius), Circle(-3j, radius),
               Circle(3, radius), Circle(3j, radius)]
    return from_circle_pairing(circles, verify=verify)


def fuchsian_group(s):
    """Unit circles centered at -3s, -s, 3s, s on the real line."""
    circles = [Circle(-3 * s, 1), Circle(-s, 1),
               Circle(3 * s, 1), Circle(s, 1)]
    return from_circle_pairing(circles, twists=[-1, -1])


def near_tangent_grid(spacing=2.02):
    """
    4x4 grid of unit circles, each paired with its reflection through
    the origin (rank 8).
    """
    offsets = [-1.5, -0.5, 0.5, 1.5]
    upper = [complex(x, y) * spacing for y in offsets[2:] for x in offsets]
    circles = [Circle(c, 1) for c in upper] + [Circle(-c, 1) for c in upper]
    return from_circle_pairing(circles)


def random_circle_pairing(rng, rank=2, extent=6.0, min_gap=0.2,
                          max_tries=10000):
    """
    A classical group from 2g random disjoint circles, equal radii
    within a pair, random twists.
    """
    circles = [None] * (2 * rank)
    placed = []
    for i in range(rank):
        radius = rng.uniform(0.4, 1.2)
        for j in (i, i + rank):
            for _ in range(max_tries):
                candidate = Circle(complex(*rng.uniform(-extent, extent, 2)),
                                   radius)
                if all(candidate.gap(c) > min_gap for c in placed):
                    break
            else:
                raise RuntimeError('Could not place %d disjoint circles'
                                   % (2 * rank))
            placed.append(candidate)
            circles[j] = candidate
    twists = [cmath.exp(1j * rng.uniform(0, 2 * math.pi))
              for _ in range(rank)]
    return from_circle_pairing(circles, twists)


def random_group(rng, rank=2, disk=5.0, multipliers=(1.5, 20.0)):
    """
    Fixed points uniform in the disk |z| < 5, multiplier modulus
    log-uniform in [1.5, 20] with uniform argument.
    """
    def point():
        r = disk * math.sqrt(rng.uniform())
        return r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))

    lo, hi = math.log(multipliers[0]), math.log(multipliers[1])
    generators = []
    for _ in range(rank):
        attracting, repelling = point(), point()
        k = math.exp(rng.uniform(lo, hi)) * cmath.exp(
            1j * rng.uniform(0, 2 * math.pi))
        generators.append(
            moebius.from_fixed_points(attracting, repelling, k))
    return SchottkyGroup(generators)


def group_from_json(data):
    """Build a group from the JSON document schema."""
    if not isinstance(data, dict):
        raise GroupParseError('expected an object', field='$')
    if 'generators' not in data:
        raise GroupParseError('missing', field='generators')
    raw = data['generators']
    if not isinstance(raw, list) or not raw:
        raise GroupParseError('expected a non-empty list', field='generators')
    generators = [moebius.from_json(m, 'generators[%d]' % i)
                  for i, m in enumerate(raw)]
    rank = data.get('rank', len(generators))
    if rank != len(generators):
        raise GroupParseError('rank %r does not match %d generators'
                              % (rank, len(generators)), field='rank')
    pairing = None
    if data.get('circles') is not None:
        pairing = CirclePairing(_circles_from_json(data['circles'], rank))
    return SchottkyGroup(generators, pairing)


def _circles_from_json(raw, rank):
    if not isinstance(raw, list) or len(raw) != 2 * rank:
        raise GroupParseError('expected %d circles' % (2 * rank),
                              field='circles')
    circles = []
    for i, item in enumerate(raw):
        field = 'circles[%d]' % i
        try:
            center = item['center']
            circles.append(Circle(complex(center[0], center[1]),
                                  item['radius']))
        except (KeyError, TypeError, IndexError):
            raise GroupParseError('expected {"center": [re, im], '
                                  '"radius": r}', field=field)
        except ValueError as e:
            raise GroupParseError(str(e), field=field)
    return circles
