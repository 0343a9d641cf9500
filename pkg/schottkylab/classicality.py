# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Classical fundamental domains: verification, a best-first search over
Nielsen moves for a classical generating set, classification of
degenerating domain sequences, and a deformation path toward
classical groups.
"""

import cmath
import heapq
import itertools
import logging
import math

import numpy as np
from scipy import optimize

from .errors import DegenerateImage, DisjointnessViolation, \
    InconsistentSequence, NonLoxodromicError, OrientationViolation, \
    PairingViolation
from .geometry import Circle, DegeneratePoint
from . import moebius
from .moebius import INFINITY, MoebiusMap
from .schottky import CirclePairing, SchottkyGroup, image_circle, \
    inverse_word, reduce_word, word_to_map

log = logging.getLogger('schottkylab')

__all__ = [
    'ClassicalCertificate', 'FailureReport', 'verify_classical_domain',
    'candidate_pairings', 'search_classical_generators', 'scramble',
    'DomainSequence', 'SingularityReport', 'classify_domain_sequence',
    'domain_sequence_from_groups', 'DeformationStep',
    'deform_toward_classical', 'TANGENCY', 'DEGENERATION', 'COLLAPSING',
    ]

ORIENTATION_SAMPLES = 64
PAIRING_TOLERANCE = 1e-8
APOLLONIUS_SCALES = (0.5, 1 / math.sqrt(2), 1.0, math.sqrt(2), 2.0)
ISOMETRIC_SCALES = (0.5, 0.75, 1.0, 1.0 / 0.75, 2.0)
# Exhaustive candidate products only up to this many combinations
PRODUCT_LIMIT = 4096
# Priority penalty per Nielsen move, in units of overlap
DEPTH_PENALTY = 0.5
MAX_WORD_LENGTH = 24
DOMAIN_SLACK = 0.05
REFINE_EVALUATIONS = 60

TANGENCY = 'Tangency'
DEGENERATION = 'Degeneration'
COLLAPSING = 'Collapsing'
SINGULAR_TOLERANCE = 1e-6
POWER_MAX = 50.0

CERTIFIED_MARGIN = 0.1
MAX_STEP_CHANGE = 0.05
INITIAL_EPSILON = 0.1
MAX_HALVINGS = 6


class ClassicalCertificate(object):
    def __init__(self, generators, pairing, margin, words=None, depth=0):
        self.generators = tuple(generators)
        self.pairing = pairing
        self.margin = margin
        self.words = words
        self.depth = depth

    error = False

    @property
    def group(self):
        return SchottkyGroup(self.generators, self.pairing, verify=False)

    def to_json(self):
        data = {
            'generators': [moebius.to_json(f) for f in self.generators],
            'circles': self.pairing.to_json(),
            'margin': self.margin,
            'depth': self.depth,
            }
        if self.words is not None:
            data['words'] = [list(w) for w in self.words]
        return data

    def __repr__(self):
        return '<ClassicalCertificate margin=%g depth=%d>' % (self.margin,
                                                              self.depth)


class FailureReport(object):
    """The search ran out of budget; not a claim of non-classicality."""

    error = True

    def __init__(self, best_cost, visited, best_generators, best_words=None):
        self.best_cost = best_cost
        self.visited = visited
        self.best_generators = tuple(best_generators)
        self.best_words = best_words

    def to_json(self):
        data = {
            'status': 'budget exhausted',
            'best_cost': self.best_cost,
            'visited': self.visited,
            'best_generators': [moebius.to_json(f)
                                for f in self.best_generators],
            }
        if self.best_words is not None:
            data['best_words'] = [list(w) for w in self.best_words]
        return data

    def __repr__(self):
        return '<FailureReport cost=%g visited=%d>' % (self.best_cost,
                                                       self.visited)


def verify_classical_domain(generators, pairing):
    generators = tuple(generators)
    if not isinstance(pairing, CirclePairing):
        pairing = CirclePairing(pairing)
    g = len(generators)
    if pairing.rank != g:
        raise ValueError('%d circles for %d generators' % (len(pairing), g))

    margin = None
    for (i, j), gap in sorted(pairing.gaps().items()):
        if gap <= 0:
            raise DisjointnessViolation(
                (i, j), 'Disks %d and %d overlap or touch (gap %g)'
                % (i, j, gap))
        if margin is None or gap < margin:
            margin = gap

    for i, f in enumerate(generators, 1):
        source, target = pairing.circle(i), pairing.circle(i + g)
        try:
            image = image_circle(f, source)
        except DegenerateImage as e:
            raise PairingViolation(i, 'Generator %d: %s' % (i, e))
        if not image.isclose(target, PAIRING_TOLERANCE):
            raise PairingViolation(
                i, 'Generator %d maps circle %d to %r, not %r'
                % (i, i, image, target))

        ring = source.points(ORIENTATION_SAMPLES, offset=0.1) - \
            source.center
        outside = source.center + 1.5 * ring
        images = list(moebius.apply_array(f, outside))
        images.append(moebius.apply(f, INFINITY))
        for z in images:
            if z is INFINITY or not np.isfinite(z) or \
                    abs(z - target.center) >= target.radius:
                raise OrientationViolation(
                    i, 'Generator %d does not map the exterior of circle %d '
                    'into circle %d' % (i, i, i + g))

    return ClassicalCertificate(generators, pairing, margin)


# Search

def _apollonius_pairs(f):
    attracting, repelling = moebius.fixed_points(f)
    if attracting is INFINITY or repelling is INFINITY:
        return []
    k = abs(moebius.multiplier(f))
    u = MoebiusMap(attracting, repelling, 1, 1)
    symmetric = 1 / math.sqrt(k)
    pairs = []
    for scale in APOLLONIUS_SCALES:
        rho = symmetric * scale
        if not (rho < 1 and rho * k > 1):
            continue
        try:
            pairs.append((image_circle(u, Circle(0, rho)),
                          image_circle(u, Circle(0, rho * k))))
        except DegenerateImage:
            continue
    return pairs


def _isometric_pairs(f):
    # |z + d/c| = s/|c| goes to |w - a/c| = 1/(s|c|)
    if abs(f.c) < 1e-14:
        return []
    radius = 1.0 / abs(f.c)
    return [(Circle(-f.d / f.c, s * radius), Circle(f.a / f.c, radius / s))
            for s in ISOMETRIC_SCALES]


def candidate_pairings(f):
    """
    Circle pairs (source, target) that f maps onto each other,
    exterior into interior.
    """
    return _isometric_pairs(f) + _apollonius_pairs(f)


def _pair_gaps(centers, radii):
    i, j = np.triu_indices(centers.shape[-1], 1)
    return (np.abs(centers[..., i] - centers[..., j])
            - radii[..., i] - radii[..., j])


def _evaluate(generators):
    """
    (cost, margin, sources) of the cheapest candidate domain, cost
    being the total overlap; sources is None when some generator has
    no candidates.
    """
    g = len(generators)
    options = [candidate_pairings(f) for f in generators]
    if not all(options):
        return float('inf'), None, None
    sizes = [len(o) for o in options]
    if np.prod(sizes) <= PRODUCT_LIMIT:
        choices = np.array(list(itertools.product(*[range(n)
                                                     for n in sizes])))
    else:
        choices = np.repeat(np.arange(min(sizes))[:, None], g, axis=1)
    centers, radii = [], []
    for side in (0, 1):
        for i, pairs in enumerate(options):
            c = np.array([p[side].center for p in pairs])
            r = np.array([p[side].radius for p in pairs])
            centers.append(c[choices[:, i]])
            radii.append(r[choices[:, i]])
    gaps = _pair_gaps(np.stack(centers, axis=1), np.stack(radii, axis=1))
    costs = np.maximum(0.0, -gaps).sum(axis=1)
    margins = gaps.min(axis=1)
    best = np.lexsort((-margins, costs))[0]
    sources = [options[i][k][0] for i, k in enumerate(choices[best])]
    return float(costs[best]), float(margins[best]), sources


def _pairing_for(generators, sources):
    targets = [image_circle(f, c) for f, c in zip(generators, sources)]
    return CirclePairing(list(sources) + targets)


def _refine(generators, sources):
    """
    Move the source circles by least squares until every gap and every
    pole clearance reaches a small positive slack. Returns the sources
    or None when the generators have no finite poles.
    """
    mats = moebius.stack(generators)
    a, c, d = mats[:, 0, 0], mats[:, 1, 0], mats[:, 1, 1]
    if np.any(np.abs(c) < 1e-14):
        return None
    pole = -d / c
    slack = DOMAIN_SLACK * np.mean([s.radius for s in sources])

    def residuals(x):
        centers = x[0::3] + 1j * x[1::3]
        radii = np.exp(x[2::3])
        m = centers - pole
        q = np.abs(m) ** 2 - radii ** 2
        q = np.where(np.abs(q) < 1e-300, 1e-300, q)
        image_centers = a / c - np.conj(m) / (q * c * c)
        image_radii = radii / (np.abs(q) * np.abs(c) ** 2)
        gaps = _pair_gaps(np.concatenate([centers, image_centers]),
                          np.concatenate([radii, image_radii]))
        clearance = radii - np.abs(m)
        return np.maximum(0.0, slack - np.concatenate([gaps, clearance]))

    x0 = np.array([[s.center.real, s.center.imag, math.log(s.radius)]
                   for s in sources]).ravel()
    try:
        fit = optimize.least_squares(residuals, x0,
                                     max_nfev=REFINE_EVALUATIONS)
    except ValueError as e:
        log.debug('refinement failed: %s', e)
        return None
    x = fit.x
    return [Circle(complex(x[3 * i], x[3 * i + 1]), math.exp(x[3 * i + 2]))
            for i in range(len(generators))]


def _try_certify(generators, sources):
    try:
        pairing = _pairing_for(generators, sources)
        if pairing.margin() <= 0:
            return None
        return verify_classical_domain(generators, pairing)
    except (DegenerateImage, DisjointnessViolation, PairingViolation,
            OrientationViolation, ValueError) as e:
        log.debug('candidate domain rejected: %s', e)
        return None


def _key(generators):
    keys = []
    for f in generators:
        keys.append(min(moebius.projective_key(f),
                        moebius.projective_key(moebius.inverse(f))))
    return hash(tuple(sorted(keys)))


def _moves(generators, words, g):
    n = len(generators)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for sign in (1, -1):
                other = generators[j] if sign > 0 else \
                    moebius.inverse(generators[j])
                other_word = words[j] if sign > 0 else \
                    inverse_word(words[j], g)
                for right in (True, False):
                    if right:
                        f = moebius.compose(generators[i], other)
                        w = reduce_word(words[i] + other_word, g)
                    else:
                        f = moebius.compose(other, generators[i])
                        w = reduce_word(other_word + words[i], g)
                    if len(w) > MAX_WORD_LENGTH:
                        continue
                    if moebius.classify(f) != moebius.LOXODROMIC:
                        continue
                    yield (generators[:i] + (f,) + generators[i + 1:],
                           words[:i] + (w,) + words[i + 1:])


def search_classical_generators(G, budget=10000):
    """
    Best-first search over Nielsen moves. A node's priority is the
    total overlap of its cheapest candidate domain plus a penalty per
    move, so shallow generating sets are tried first. Every expanded
    node whose candidates overlap is refined by least squares before
    giving up on it.

    Returns a ClassicalCertificate, or a FailureReport once ``budget``
    nodes have been expanded.
    """
    if not isinstance(G, SchottkyGroup):
        G = SchottkyGroup(G)
    for i, f in enumerate(G.generators, 1):
        if moebius.classify(f) != moebius.LOXODROMIC:
            raise NonLoxodromicError('Generator %d is not loxodromic' % i)
    g = G.rank
    words = tuple((i,) for i in range(1, g + 1))
    cost, _, _ = _evaluate(tuple(G.generators))
    counter = itertools.count()
    heap = [(cost, 0, next(counter), words)]
    seen = set([_key(G.generators)])
    best = (cost, words)
    visited = 0
    while heap and visited < budget:
        _, depth, _, words = heapq.heappop(heap)
        gens = tuple(word_to_map(G, w) for w in words)
        cost, margin, sources = _evaluate(gens)
        visited += 1
        if cost < best[0]:
            best = (cost, words)
        certificate = None
        if sources is not None:
            if cost == 0 and margin > 0:
                certificate = _try_certify(gens, sources)
            if certificate is None:
                refined = _refine(gens, sources)
                if refined is not None:
                    certificate = _try_certify(gens, refined)
        if certificate is not None:
            certificate.words = words
            certificate.depth = depth
            log.info('classical generators at depth %d after %d nodes',
                     depth, visited)
            return certificate
        for child, child_words in _moves(gens, words, g):
            key = _key(child)
            if key in seen:
                continue
            seen.add(key)
            c, _, s = _evaluate(child)
            if s is None:
                continue
            heapq.heappush(heap, (c + DEPTH_PENALTY * (depth + 1), depth + 1,
                                  next(counter), child_words))
    log.info('search exhausted after %d nodes, best cost %g', visited, best[0])
    best_generators = tuple(word_to_map(G, w) for w in best[1])
    return FailureReport(best[0], visited, best_generators, best[1])


def scramble(G, rng, moves=3):
    """
    Random Nielsen moves followed by a random similarity conjugation.
    Returns the scrambled group and the words of its generators in
    the original ones.
    """
    g = G.rank
    gens = tuple(G.generators)
    words = tuple((i,) for i in range(1, g + 1))
    for _ in range(moves):
        if g < 2:
            break
        i, j = rng.choice(g, size=2, replace=False)
        sign = rng.choice([1, -1])
        other = gens[j] if sign > 0 else moebius.inverse(gens[j])
        other_word = words[j] if sign > 0 else inverse_word(words[j], g)
        if rng.uniform() < 0.5:
            f = moebius.compose(gens[i], other)
            w = reduce_word(words[i] + other_word, g)
        else:
            f = moebius.compose(other, gens[i])
            w = reduce_word(other_word + words[i], g)
        gens = gens[:i] + (f,) + gens[i + 1:]
        words = words[:i] + (w,) + words[i + 1:]
    alpha = rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    beta = complex(*rng.uniform(-2, 2, 2))
    u = MoebiusMap(alpha, beta, 0, 1)
    gens = [moebius.conjugate(f, u) for f in gens]
    return SchottkyGroup(gens), words


# Domain sequences

class DomainSequence(object):
    """Steps of 2g entries each; an entry is a Circle or a DegeneratePoint."""

    def __init__(self, steps):
        steps = [list(step) for step in steps]
        counts = set(len(step) for step in steps)
        if len(counts) > 1:
            raise InconsistentSequence('Steps have differing entry counts %s'
                                       % sorted(counts))
        self.steps = steps

    def __len__(self):
        return len(self.steps)

    @classmethod
    def from_json(cls, data):
        steps = []
        for step in data:
            entries = []
            for item in step:
                center = complex(item['center'][0], item['center'][1])
                if item['radius'] == 0:
                    entries.append(DegeneratePoint(center))
                else:
                    entries.append(Circle(center, item['radius']))
            steps.append(entries)
        return cls(steps)


class SingularityReport(object):
    def __init__(self, kind=None, indices=None, point=None, circle=None,
                 step=None):
        self.kind = kind
        self.indices = indices
        self.point = point
        self.circle = circle
        self.step = step

    def to_json(self):
        data = {'kind': self.kind or 'None', 'step': self.step}
        if self.indices is not None:
            data['indices'] = list(self.indices)
        if self.point is not None:
            data['point'] = [self.point.real, self.point.imag]
        if self.circle is not None:
            data['circle'] = self.circle.to_json()
        return data

    def __repr__(self):
        return '<SingularityReport %s %r>' % (self.kind, self.indices)


def _power_limit(k, x2, d1, d2):
    """
    Limit of x = L + c * k**-p through the last three values, with k
    the 1-based step index, or None when no p > 0 fits.
    """
    ratio = d2 / d1

    def model_ratio(p):
        return (((k - 1.0) / k) ** p - 1) / (1 - ((k - 1.0) / (k - 2)) ** p)

    lo, hi = 1e-6, POWER_MAX
    if not (model_ratio(hi) < ratio < model_ratio(lo)):
        return None
    while hi - lo > 1e-10 * hi:
        mid = (lo + hi) / 2
        if model_ratio(mid) > ratio:
            lo = mid
        else:
            hi = mid
    p = (lo + hi) / 2
    c = d2 / (k ** -p - (k - 1.0) ** -p)
    return x2 - c * k ** -p


def _extrapolate(series):
    """
    Limit of the last three values: Aitken's delta-squared for
    geometric convergence, a power-law fit for algebraic convergence,
    whichever lies closer to zero.
    """
    x0, x1, x2 = series[-3:]
    d1, d2 = x1 - x0, x2 - x1
    denom = d2 - d1
    if not (abs(d2) < abs(d1) and denom != 0):
        return x2
    limits = [x2 - d2 * d2 / denom]
    if d2 / d1 > 0:
        power = _power_limit(len(series), x2, d1, d2)
        if power is not None:
            limits.append(power)
    return min(limits, key=abs)


def _onset(series):
    """First step from which the series no longer increases."""
    onset = len(series) - 1
    while onset > 0 and series[onset - 1] >= series[onset]:
        onset -= 1
    return onset


def classify_domain_sequence(seq):
    if not isinstance(seq, DomainSequence):
        seq = DomainSequence(seq)
    if len(seq) < 3:
        raise ValueError('Need at least 3 steps, got %d' % len(seq))
    steps = seq.steps
    n = len(steps[0])
    radii = np.array([[e.radius for e in step] for step in steps])
    centers = np.array([[e.center for e in step] for step in steps])
    last = steps[-1]

    limits = [_extrapolate(radii[:, i]) for i in range(n)]
    for i in range(n):
        initial = radii[0, i]
        if isinstance(last[i], DegeneratePoint) or \
                limits[i] < SINGULAR_TOLERANCE * initial:
            return SingularityReport(DEGENERATION, (i + 1,),
                                     point=centers[-1, i],
                                     step=_onset(radii[:, i]))

    floor = SINGULAR_TOLERANCE * radii[0].min()
    tangent = None
    for i in range(n):
        for j in range(i + 1, n):
            scale = SINGULAR_TOLERANCE * (limits[i] + limits[j]) / 2
            distance = np.abs(centers[:, i] - centers[:, j])
            difference = np.abs(radii[:, i] - radii[:, j])
            if (_extrapolate(distance) < scale
                    and _extrapolate(difference) < scale
                    and min(limits[i], limits[j]) > floor):
                return SingularityReport(
                    COLLAPSING, (i + 1, j + 1),
                    circle=Circle(centers[-1, i], limits[i]),
                    step=_onset(distance + difference))
            gaps = distance - radii[:, i] - radii[:, j]
            if tangent is None and _extrapolate(gaps) < scale:
                direction = centers[-1, j] - centers[-1, i]
                point = centers[-1, i] + radii[-1, i] * direction / \
                    abs(direction) if abs(direction) > 0 else centers[-1, i]
                tangent = SingularityReport(TANGENCY, (i + 1, j + 1),
                                            point=point, step=_onset(gaps))
    if tangent is not None:
        return tangent
    return SingularityReport()


def domain_sequence_from_groups(groups):
    return DomainSequence([G.require_pairing().circles for G in groups])


# Deformation

class DeformationStep(tuple):
    """(group, estimate) with the inflation factor and any certificate."""

    def __new__(cls, group, estimate, factor=1.0, certificate=None):
        self = tuple.__new__(cls, (group, estimate))
        self.factor = factor
        self.certificate = certificate
        return self

    @property
    def group(self):
        return self[0]

    @property
    def estimate(self):
        return self[1]

    @property
    def certified(self):
        return self.certificate is not None


def _inflate(forms, factor):
    return SchottkyGroup([moebius.from_fixed_points(a, r, k * factor)
                          for a, r, k in forms])


def _certify(G, budget):
    result = search_classical_generators(G, budget)
    if not result.error and result.margin > CERTIFIED_MARGIN:
        return result
    return None


def deform_toward_classical(G, steps=20, budget=10000, estimator=None):
    """
    Scale every multiplier modulus by (1+eps) per step, keeping fixed
    points, until a classical generating set with margin above 0.1 is
    found or ``steps`` steps have been taken.
    """
    from .dimension import estimate_dimension
    if estimator is None:
        estimator = estimate_dimension
    forms = []
    for f in G.generators:
        attracting, repelling = moebius.fixed_points(f)
        forms.append((attracting, repelling, moebius.multiplier(f)))

    estimate = estimator(G)
    if estimate.value >= 1:
        log.warning('Deforming a group of dimension %.3f >= 1',
                    estimate.value)
    trace = [DeformationStep(G, estimate, 1.0, _certify(G, budget))]
    factor = 1.0
    while not trace[-1].certified and len(trace) <= steps:
        epsilon = INITIAL_EPSILON
        for halvings in range(MAX_HALVINGS + 1):
            candidate = _inflate(forms, factor * (1 + epsilon))
            next_estimate = estimator(candidate)
            change = abs(next_estimate.value - estimate.value)
            if change <= MAX_STEP_CHANGE:
                break
            if halvings == MAX_HALVINGS:
                log.warning('Step changes the dimension by %.3f even at '
                            'eps=%g', change, epsilon)
                break
            epsilon /= 2
        factor *= 1 + epsilon
        estimate = next_estimate
        log.info('deformation step %d: factor %.4f dimension %.4f',
                 len(trace), factor, estimate.value)
        trace.append(DeformationStep(candidate, estimate, factor,
                                     _certify(candidate, budget)))
    return trace
