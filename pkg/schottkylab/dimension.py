# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Hausdorff dimension of limit sets.

Three estimators: the exponent of convergence of the orbital Poincare
series (from shell growth ratios), the spectral radius of a transfer
matrix on the depth-k disk cover, and plain box counting. The
rectifiability proxy reads the series at s = 1.
"""

import logging
import math

import numpy as np
from scipy import sparse, stats

from .errors import DegenerateFit, NonConvergedError
from .schottky import depth_disks, word_shells

log = logging.getLogger('schottkylab')

__all__ = [
    'EXPONENT', 'TRANSFER', 'BOXCOUNT', 'METHODS',
    'CONVERGES_LIKELY', 'DIVERGES_LIKELY', 'INCONCLUSIVE',
    'DimensionEstimate', 'SeriesTruncation', 'displacements', 'shell_sums',
    'poincare_partial_sum', 'exponent_of_convergence', 'transfer_dimension',
    'box_counting', 'cover_points', 'cover_scales', 'rectifiability_proxy',
    'default_depth', 'estimate_dimension', 'dimension_trend',
    ]

EXPONENT = 'Exponent'
TRANSFER = 'Transfer'
BOXCOUNT = 'BoxCount'
METHODS = (EXPONENT, TRANSFER, BOXCOUNT)

CONVERGES_LIKELY = 'ConvergesLikely'
DIVERGES_LIKELY = 'DivergesLikely'
INCONCLUSIVE = 'Inconclusive'

EXPONENT_TOLERANCE = 1e-3
TRANSFER_TOLERANCE = 1e-4
POWER_ITERATIONS = 10000
POWER_TOLERANCE = 1e-10
RATIO_OSCILLATION = 0.5
PROXY_DELTA = 0.05

# Largest shell the default depth may produce
WORD_BUDGET = 200000


class DimensionEstimate(object):
    def __init__(self, value, method, depth, residual):
        self.value = min(2.0, max(0.0, float(value)))
        self.method = method
        self.depth = depth
        self.residual = abs(float(residual))

    def to_json(self):
        return {
            'method': self.method,
            'value': self.value,
            'depth': self.depth,
            'residual': self.residual,
            }

    def __repr__(self):
        return '<DimensionEstimate %s depth=%s value=%.4f residual=%.2g>' % (
            self.method, self.depth, self.value, self.residual)


class SeriesTruncation(object):
    def __init__(self, s, depth, partial_sum, last_shell):
        self.s = s
        self.depth = depth
        self.partial_sum = partial_sum
        self.last_shell = last_shell

    def __repr__(self):
        return '<SeriesTruncation s=%g depth=%d sum=%g last=%g>' % (
            self.s, self.depth, self.partial_sum, self.last_shell)


def displacements(G, depth):
    """Base-point displacement of every reduced word, one array per length."""
    result = []
    for _, mats in word_shells(G, depth):
        norm = (np.abs(mats) ** 2).sum(axis=(1, 2)) / 2
        result.append(np.arccosh(np.maximum(norm, 1.0)))
    return result


def _shells(disps, s):
    return np.array([np.exp(-s * d).sum() for d in disps])


def shell_sums(G, s_values, depth):
    """(len(s_values), depth) array of per-length sums S_j(s)."""
    disps = displacements(G, depth)
    return np.array([_shells(disps, s) for s in np.atleast_1d(s_values)])


def poincare_partial_sum(G, s, depth):
    if s < 0:
        raise ValueError('Exponent must be >= 0, got %r' % s)
    if depth < 1:
        raise ValueError('Depth must be >= 1, got %r' % depth)
    shells = shell_sums(G, [s], depth)[0]
    return SeriesTruncation(s, depth, float(shells.sum()), float(shells[-1]))


def _bisect(f, lo, hi, tol):
    flo = f(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fmid = f(mid)
        log.debug('bisection [%.6f, %.6f] f(%.6f)=%g', lo, hi, mid, fmid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return (lo + hi) / 2


def exponent_of_convergence(G, depth=10, tolerance=EXPONENT_TOLERANCE):
    if depth < 4:
        raise ValueError('Exponent estimate needs depth >= 4, got %r' % depth)
    disps = displacements(G, depth)
    last, previous = disps[-1], disps[-2]

    def log_ratio(s):
        return math.log(np.exp(-s * last).sum() / np.exp(-s * previous).sum())

    if log_ratio(0.0) <= 0:
        return DimensionEstimate(0.0, EXPONENT, depth, log_ratio(0.0))
    if log_ratio(2.0) >= 0:
        log.warning('Shell ratio still grows at s=2; clamping exponent')
        return DimensionEstimate(2.0, EXPONENT, depth, log_ratio(2.0))

    s = _bisect(log_ratio, 0.0, 2.0, tolerance)
    shells = _shells(disps, s)
    ratios = shells[1:] / shells[:-1]
    log.debug('shell ratios at s=%.4f: %s', s, ratios[-3:])
    if abs(ratios[-1] / ratios[-2] - 1) > RATIO_OSCILLATION:
        raise NonConvergedError(
            'Shell ratios oscillate at depth %d: %.3g then %.3g'
            % (depth, ratios[-2], ratios[-1]))
    return DimensionEstimate(s, EXPONENT, depth, log_ratio(s))


def _transfer_structure(G, depth):
    """
    Transition v <- u for v = (j,) + u[:-1], with log weights
    log |gamma_j'(center of D_u)|.
    """
    g = G.rank
    words, centers, _ = depth_disks(G, depth)
    n = len(words)
    base = 2 * g - 1
    # lexicographic rank of a reduced word
    ranks_weight = base ** np.arange(depth - 1, -1, -1)

    def rank_of(w):
        first = (w[:, 0] - 1) * base ** (depth - 1)
        if depth == 1:
            return first
        prev = w[:, :-1]
        cur = w[:, 1:]
        inv_prev = (prev + g - 1) % (2 * g) + 1
        digits = (cur - 1) - (cur > inv_prev)
        return first + (digits * ranks_weight[1:]).sum(axis=1)

    L = G.letter_matrices()
    rows, cols, logw = [], [], []
    for j in range(1, 2 * g + 1):
        allowed = words[:, 0] != (j + g - 1) % (2 * g) + 1
        u = np.nonzero(allowed)[0]
        v_words = np.concatenate(
            [np.full((len(u), 1), j, dtype=words.dtype),
             words[u, :-1]], axis=1)
        c, d = L[j - 1, 1, 0], L[j - 1, 1, 1]
        rows.append(rank_of(v_words.astype(np.int64)))
        cols.append(u)
        logw.append(-2.0 * np.log(np.abs(c * centers[u] + d)))
    return (np.concatenate(rows), np.concatenate(cols),
            np.concatenate(logw), n)


def _spectral_radius(T):
    n = T.shape[0]
    x = np.full(n, 1.0 / n)
    rho = 0.0
    for i in range(POWER_ITERATIONS):
        y = T.dot(x)
        total = y.sum()
        if total == 0:
            return 0.0
        new_rho = total / x.sum()
        x = y / total
        if abs(new_rho - rho) <= POWER_TOLERANCE * new_rho:
            return new_rho
        rho = new_rho
    raise NonConvergedError('Power iteration did not converge in %d steps'
                            % POWER_ITERATIONS)


def transfer_dimension(G, depth=6, tolerance=TRANSFER_TOLERANCE):
    G.require_pairing()
    if depth < 1:
        raise ValueError('Depth must be >= 1, got %r' % depth)
    rows, cols, logw, n = _transfer_structure(G, depth)

    def log_rho(s):
        T = sparse.csr_matrix((np.exp(s * logw), (rows, cols)), shape=(n, n))
        return math.log(_spectral_radius(T))

    at_zero = log_rho(0.0)
    if at_zero <= 0:
        return DimensionEstimate(0.0, TRANSFER, depth, at_zero)
    at_two = log_rho(2.0)
    if at_two >= 0:
        log.warning('Transfer spectral radius exceeds one at s=2')
        return DimensionEstimate(2.0, TRANSFER, depth, at_two)
    s = _bisect(log_rho, 0.0, 2.0, tolerance)
    return DimensionEstimate(s, TRANSFER, depth, log_rho(s))


def _box_count(x, y, scale):
    best = None
    for dx in (0.0, 0.5):
        for dy in (0.0, 0.5):
            ix = np.floor(x / scale + dx).astype(np.int64)
            iy = np.floor(y / scale + dy).astype(np.int64)
            count = len(np.unique(np.stack([ix, iy], axis=1), axis=0))
            if best is None or count < best:
                best = count
    return best


def box_counting(points, scales):
    points = np.asarray(points, dtype=complex).ravel()
    scales = np.sort(np.asarray(scales, dtype=float))
    if len(points) < 100:
        raise ValueError('Box counting needs >= 100 points, got %d'
                         % len(points))
    if len(scales) < 4 or scales[0] <= 0:
        raise ValueError('Box counting needs >= 4 positive scales')
    if scales[-1] / scales[0] < 100 * (1 - 1e-9):
        raise ValueError('Scales must span at least two decades')
    if np.all(points == points[0]):
        raise DegenerateFit('All %d points coincide' % len(points))

    x = points.real - points.real.min()
    y = points.imag - points.imag.min()
    counts = np.array([_box_count(x, y, e) for e in scales])
    log.debug('box counts %s at scales %s', counts, scales)
    fit = stats.linregress(np.log(1.0 / scales), np.log(counts))
    predicted = fit.intercept + fit.slope * np.log(1.0 / scales)
    rms = math.sqrt(np.mean((np.log(counts) - predicted) ** 2))
    return DimensionEstimate(fit.slope, BOXCOUNT, None, rms)


def cover_points(G, depth, boundary=8, minimum=100):
    """
    Centers of the depth-k cover plus points on each disk boundary,
    at least ``minimum`` points in all.
    """
    _, centers, radii = depth_disks(G, depth)
    boundary = max(boundary, -(-minimum // len(centers)))
    ring = np.exp(2j * np.pi * np.arange(boundary) / boundary)
    edge = centers[:, None] + radii[:, None] * ring[None, :]
    return np.concatenate([centers, edge.ravel()]), float(radii.max())


def cover_scales(points, max_radius, count=10):
    """
    Log-spaced scales from diam/10 down to the cover resolution (ten
    disk radii), never less than two decades.
    """
    diam = max(np.ptp(points.real), np.ptp(points.imag))
    if diam == 0:
        raise DegenerateFit('Cover has zero extent')
    lo = max(diam * 1e-5, 10 * max_radius)
    lo = min(lo, diam / 1000)
    return np.logspace(math.log10(lo), math.log10(diam / 10), count)


def rectifiability_proxy(G, depth=8):
    if depth < 4:
        raise ValueError('Proxy needs depth >= 4, got %r' % depth)
    shells = shell_sums(G, [1.0], depth)[0]
    ratios = shells[-3:] / shells[-4:-1]
    log.debug('shell ratios at s=1: %s', ratios)
    if np.all(ratios < 1 - PROXY_DELTA):
        return CONVERGES_LIKELY
    if np.all(ratios > 1 + PROXY_DELTA):
        return DIVERGES_LIKELY
    return INCONCLUSIVE


# Depth caps of default_depth, per estimator
DEPTH_CAPS = {EXPONENT: 10, TRANSFER: 6, BOXCOUNT: 8}


def default_depth(G, method=EXPONENT, cap=None):
    """Deepest level up to ``cap`` with a shell within WORD_BUDGET words."""
    g = G.rank
    if cap is None:
        cap = DEPTH_CAPS[method]
    depth = 1
    while depth < cap and 2 * g * (2 * g - 1) ** depth <= WORD_BUDGET:
        depth += 1
    return depth


def estimate_dimension(G, method=EXPONENT, depth=None, config=None):
    """
    Dispatch to one estimator. ``config`` (an ExperimentConfig) supplies
    the depth when none is given, the per-estimator depth caps and the
    bisection tolerances.
    """
    if method not in METHODS:
        raise ValueError('Unknown method %r, expected one of %s'
                         % (method, ', '.join(METHODS)))
    if depth is None and config is not None:
        depth = config.depth
    if depth is None:
        cap = config.depth_cap(method) if hasattr(config, 'depth_cap') \
            else None
        depth = default_depth(G, method, cap)
    if method == EXPONENT:
        tolerance = getattr(config, 'exponent_tolerance', EXPONENT_TOLERANCE)
        return exponent_of_convergence(G, depth, tolerance)
    if method == TRANSFER:
        tolerance = getattr(config, 'transfer_tolerance', TRANSFER_TOLERANCE)
        return transfer_dimension(G, depth, tolerance)
    points, max_radius = cover_points(G, depth)
    estimate = box_counting(points, cover_scales(points, max_radius))
    estimate.depth = depth
    return estimate


def dimension_trend(G, method, depths):
    estimates = []
    for depth in sorted(depths):
        estimate = estimate_dimension(G, method, depth)
        log.info('%s depth %d: %.4f', method, depth, estimate.value)
        estimates.append(estimate)
    return estimates
