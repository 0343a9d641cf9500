# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""Moebius transformations of the Riemann sphere"""

import cmath
import logging
import math

import numpy as np

from .errors import CIsZeroError, GroupParseError, IdentityError, PoleError
from .geometry import Circle

log = logging.getLogger('schottkylab')

# Per-entry tolerance of projective comparisons
EPSILON = 1e-9
DET_TOLERANCE = 1e-12
SINGULAR_TOLERANCE = 1e-14

IDENTITY = 'identity'
PARABOLIC = 'parabolic'
ELLIPTIC = 'elliptic'
LOXODROMIC = 'loxodromic'


class _Infinity(object):
    __slots__ = ()

    def __repr__(self):
        return 'INFINITY'

    def __reduce__(self):
        return (_infinity, ())


def _infinity():
    return INFINITY


INFINITY = _Infinity()


def is_infinity(z):
    return z is INFINITY


class FixedPoints(tuple):
    """
    Pair of fixed points, attracting point first. ``ordered`` is False
    when the two points could not be told apart (elliptic maps).
    """

    def __new__(cls, first, second, ordered=True):
        self = tuple.__new__(cls, (first, second))
        self.ordered = ordered
        return self

    @property
    def attracting(self):
        return self[0]

    @property
    def repelling(self):
        return self[1]


class MoebiusMap(object):
    __slots__ = ('a', 'b', 'c', 'd')

    def __init__(self, a, b, c, d, normalize=True):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        if not normalize:
            # products and inverses of normalized maps keep det 1
            self.a, self.b, self.c, self.d = a, b, c, d
            return
        scale = abs(a * d) + abs(b * c)
        det = a * d - b * c
        if det == 0 or abs(det) <= SINGULAR_TOLERANCE * scale:
            raise ValueError('Singular matrix %r' % ((a, b, c, d),))
        if abs(det - 1) > DET_TOLERANCE * max(1.0, scale):
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_array(cls, m):
        return cls(m[0][0], m[0][1], m[1][0], m[1][1])

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def __mul__(self, other):
        return compose(self, other)

    def __call__(self, z):
        return apply(self, z)

    def __invert__(self):
        return inverse(self)

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return projectively_equal(self, other)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(projective_key(self))

    def __repr__(self):
        return 'MoebiusMap(%r, %r, %r, %r)' % (self.a, self.b, self.c, self.d)


def projectively_equal(f, g, tol=EPSILON):
    fe = (f.a, f.b, f.c, f.d)
    ge = (g.a, g.b, g.c, g.d)
    for sign in (1, -1):
        if all(abs(x - sign * y) <= tol for x, y in zip(fe, ge)):
            return True
    return False


def projective_key(f, digits=8):
    entries = [f.a, f.b, f.c, f.d]
    for x in entries:
        if abs(x) > EPSILON:
            if x.real < -EPSILON or (abs(x.real) <= EPSILON and x.imag < 0):
                entries = [-e for e in entries]
            break
    key = []
    for x in entries:
        key.append(round(x.real, digits) + 0.0)
        key.append(round(x.imag, digits) + 0.0)
    return tuple(key)


def compose(f, g):
    return MoebiusMap(
        f.a * g.a + f.b * g.c,
        f.a * g.b + f.b * g.d,
        f.c * g.a + f.d * g.c,
        f.c * g.b + f.d * g.d,
        normalize=False)


def inverse(f):
    return MoebiusMap(f.d, -f.b, -f.c, f.a, normalize=False)


def conjugate(f, u):
    """Return u o f o u^-1."""
    return compose(compose(u, f), inverse(u))


def apply(f, z):
    if z is INFINITY:
        if f.c == 0:
            return INFINITY
        return f.a / f.c
    z = complex(z)
    den = f.c * z + f.d
    if den == 0:
        return INFINITY
    return (f.a * z + f.b) / den


def apply_array(f, zs):
    """
    Vectorized application to finite points. The pole maps to a
    non-finite complex value here; callers keep away from it.
    """
    zs = np.asarray(zs, dtype=complex)
    with np.errstate(divide='ignore', invalid='ignore'):
        return (f.a * zs + f.b) / (f.c * zs + f.d)


def derivative_modulus(f, z):
    if z is INFINITY:
        raise PoleError('Derivative at infinity is not defined in this chart')
    den = f.c * complex(z) + f.d
    if den == 0:
        raise PoleError('%r is the pole of %r' % (z, f))
    return 1.0 / abs(den) ** 2


def _is_identity(f):
    for sign in (1, -1):
        if (abs(f.a - sign) <= EPSILON and abs(f.d - sign) <= EPSILON
                and abs(f.b) <= EPSILON and abs(f.c) <= EPSILON):
            return True
    return False


def classify(f):
    if _is_identity(f):
        return IDENTITY
    t2 = f.trace ** 2
    if abs(t2 - 4) <= EPSILON:
        return PARABOLIC
    if abs(t2.imag) <= EPSILON and 0 <= t2.real < 4:
        return ELLIPTIC
    return LOXODROMIC


def _eigenvalue(f):
    # eigenvalue of larger modulus
    tr = f.trace
    root = cmath.sqrt(tr * tr - 4)
    lam = (tr + root) / 2
    other = (tr - root) / 2
    if abs(other) > abs(lam):
        lam = other
    return lam


def translation_length(f):
    return 2.0 * math.log(abs(_eigenvalue(f)))


def multiplier(f):
    return _eigenvalue(f) ** 2


def fixed_points(f):
    if classify(f) == IDENTITY:
        raise IdentityError('The identity fixes every point')

    A, B, C = f.c, f.d - f.a, -f.b
    if A == 0:
        if B == 0:
            return FixedPoints(INFINITY, INFINITY)
        finite = -C / B
        # derivative at the finite point is a**2
        if abs(f.a) < 1:
            return FixedPoints(finite, INFINITY)
        if abs(f.a) > 1:
            return FixedPoints(INFINITY, finite)
        log.debug('Unordered fixed points of %r', f)
        return FixedPoints(INFINITY, finite, ordered=False)

    root = cmath.sqrt(B * B - 4 * A * C)
    if (B.conjugate() * root).real < 0:
        root = -root
    q = -(B + root) / 2
    if q == 0:
        first = second = 0j
    else:
        first, second = q / A, C / q
    if classify(f) == PARABOLIC:
        z = -B / (2 * A)
        return FixedPoints(z, z)

    s1 = abs(f.c * first + f.d)
    s2 = abs(f.c * second + f.d)
    if abs(s1 - s2) <= EPSILON:
        log.debug('Unordered fixed points of %r', f)
        return FixedPoints(first, second, ordered=False)
    # |f'(z)| = 1/|cz+d|**2 is below one at the attracting point
    if s1 > s2:
        return FixedPoints(first, second)
    return FixedPoints(second, first)


def from_fixed_points(attracting, repelling, k):
    """
    Loxodromic map with the given fixed points and multiplier ``k``
    (|k| > 1, the derivative at the repelling point is k).
    """
    k = complex(k)
    if abs(k) <= 1:
        raise ValueError('Multiplier must have modulus > 1, got %r' % k)
    if attracting is INFINITY and repelling is INFINITY:
        raise ValueError('Fixed points must differ')
    if attracting is INFINITY:
        u = MoebiusMap(1, repelling, 0, 1)
    elif repelling is INFINITY:
        u = MoebiusMap(attracting, 1, 1, 0)
    else:
        if abs(attracting - repelling) <= EPSILON:
            raise ValueError('Fixed points must differ')
        u = MoebiusMap(attracting, repelling, 1, 1)
    lam = cmath.sqrt(k)
    return conjugate(MoebiusMap(lam, 0, 0, 1 / lam), u)


def isometric_circle(f):
    if abs(f.c) < 1e-14:
        raise CIsZeroError('%r fixes infinity' % (f,))
    return Circle(-f.d / f.c, 1.0 / abs(f.c))


def base_displacement(f):
    s = (abs(f.a) ** 2 + abs(f.b) ** 2 + abs(f.c) ** 2 + abs(f.d) ** 2) / 2
    return math.acosh(max(1.0, s))


def stack(maps):
    """(N, 2, 2) complex array of the given maps."""
    return np.array([f.as_array() for f in maps], dtype=complex).reshape(
        len(maps), 2, 2)


def to_json(f):
    return [[x.real, x.imag] for x in (f.a, f.b, f.c, f.d)]


def _entry(value, field):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(x, (int, float))
                    and not isinstance(x, bool) for x in value)):
        return complex(value[0], value[1])
    raise GroupParseError('expected a number or [re, im], got %r' % (value,),
                          field=field)


def from_json(data, field='matrix'):
    """
    Parse a matrix written as four [re, im] entries in row-major
    order, or as a nested 2x2 array of them.
    """
    if not isinstance(data, (list, tuple)):
        raise GroupParseError('expected a list', field=field)
    if len(data) == 2 and all(isinstance(row, (list, tuple)) and len(row) == 2
                              and isinstance(row[0], (list, tuple))
                              for row in data):
        data = [data[0][0], data[0][1], data[1][0], data[1][1]]
    if len(data) != 4:
        raise GroupParseError('expected 4 entries, got %d' % len(data),
                              field=field)
    entries = [_entry(x, '%s[%d]' % (field, i)) for i, x in enumerate(data)]
    try:
        return MoebiusMap(*entries)
    except ValueError:
        raise GroupParseError('matrix is singular', field=field)
