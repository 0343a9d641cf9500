import math

import numpy as np
from nose.tools import eq_ as eq
from numpy.testing import assert_allclose

from schottkylab import moebius, schottky
from schottkylab.classicality import verify_classical_domain
from schottkylab.errors import DisjointnessViolation, GroupParseError, \
    NonLoxodromicError, NoPairingError, NotReducedError
from schottkylab.geometry import Circle
from schottkylab.moebius import INFINITY, MoebiusMap
from schottkylab.schottky import CirclePairing, SchottkyGroup, \
    count_reduced_words, cyclic_group, depth_disks, enumerate_reduced_words, \
    four_circle_group, fuchsian_group, group_from_json, inverse_letter, \
    inverse_word, is_reduced, nested_disk, near_tangent_grid, \
    rank_one_group, reduce_word, sample_limit_set, word_to_map

from .util import assert_raises, assert_same_map


def test_inverse_letter():
    eq([inverse_letter(i, 2) for i in range(1, 5)], [3, 4, 1, 2])
    eq(inverse_letter(1, 1), 2)
    eq(inverse_letter(2, 1), 1)


def test_reduced_words():
    assert is_reduced((1, 2, 1), 2)
    assert not is_reduced((1, 2, 4), 2)
    eq(reduce_word((1, 2, 4, 3, 2), 2), (2,))
    eq(inverse_word((1, 2), 2), (4, 3))
    eq(reduce_word((1, 2) + inverse_word((1, 2), 2), 2), ())


def test_enumerate_reduced_words():
    for g in (1, 2, 3):
        for k in range(4):
            words = list(enumerate_reduced_words(g, k))
            eq(len(words), count_reduced_words(g, k))
            eq(words, sorted(words))
            eq(len(set(words)), len(words))
            assert all(is_reduced(w, g) and len(w) == k for w in words)


def test_enumerate_reduced_words_edges():
    eq(list(enumerate_reduced_words(2, 0)), [()])
    eq(list(enumerate_reduced_words(1, 3)), [(1, 1, 1), (2, 2, 2)])
    assert_raises(ValueError, enumerate_reduced_words, 0, 1)
    assert_raises(ValueError, enumerate_reduced_words, 2, -1)


def test_group_needs_loxodromic_generators():
    assert_raises(NonLoxodromicError, SchottkyGroup, [MoebiusMap(1, 1, 0, 1)])
    assert_raises(ValueError, SchottkyGroup, [])


def test_pairing_must_be_disjoint():
    e = assert_raises(DisjointnessViolation, schottky.from_circle_pairing,
                      [Circle(0, 1), Circle(1.5, 1)])
    eq(e.index, (1, 2))


def test_pairing_needs_even_count():
    assert_raises(ValueError, CirclePairing, [Circle(0, 1)])


def test_letters():
    G = four_circle_group()
    eq(G.rank, 2)
    eq(G.letter(1), G.generators[0])
    eq(G.letter(3), ~G.generators[0])
    assert_raises(ValueError, G.letter, 5)


def test_word_to_map():
    G = four_circle_group()
    a, b = G.generators
    assert_same_map(word_to_map(G, (1, 2, 3)), a * b * ~a)
    assert_same_map(word_to_map(G, ()), MoebiusMap.identity())
    assert_raises(NotReducedError, word_to_map, G, (1, 3))


def test_generators_pair_their_circles():
    G = four_circle_group()
    g = G.rank
    for i in range(1, 2 * g + 1):
        image = schottky.image_circle(G.letter(i), G.pairing.circle(i))
        assert image.isclose(G.pairing.circle(inverse_letter(i, g)))


def test_ping_pong():
    assert schottky.ping_pong_check(four_circle_group())
    assert schottky.ping_pong_check(rank_one_group())


def test_depth_disk_counts():
    G = four_circle_group()
    for k in range(1, 6):
        words, centers, radii = depth_disks(G, k)
        eq(len(words), 4 * 3 ** (k - 1))
        eq(words.shape, (4 * 3 ** (k - 1), k))


def test_depth_disks_match_nested_disks():
    G = four_circle_group()
    words, centers, radii = depth_disks(G, 3)
    for w, center, radius in zip(words, centers, radii):
        w = tuple(int(x) for x in w)
        disk = nested_disk(G, w[:-1], inverse_letter(w[-1], G.rank))
        assert_allclose(disk.center, center, atol=1e-12)
        assert_allclose(disk.radius, radius)


def test_depth_disks_are_nested():
    G = four_circle_group()
    parents = dict(
        (tuple(int(x) for x in w), (c, r))
        for w, c, r in zip(*depth_disks(G, 2)))
    for w, c, r in zip(*depth_disks(G, 3)):
        pc, pr = parents[tuple(int(x) for x in w[:-1])]
        assert abs(c - pc) + r < pr


def test_disks_shrink_with_depth():
    G = four_circle_group()
    radii = [schottky.max_disk_radius(G, k) for k in range(1, 6)]
    assert all(a > b for a, b in zip(radii, radii[1:]))


def test_depth_disks_need_pairing():
    assert_raises(NoPairingError, depth_disks, cyclic_group(), 2)


def test_limit_set_sample_from_disks():
    G = four_circle_group()
    sample = sample_limit_set(G, 6)
    eq(len(sample), 4 * 3 ** 5)
    eq(sample.method, 'disks')
    eq(sample.word_labels()[0], '1.1.1.1.1.1')
    inside = np.zeros(len(sample), dtype=bool)
    for circle in G.pairing.circles:
        inside |= np.abs(sample.points - circle.center) < circle.radius
    assert inside.all()


def test_limit_set_of_cyclic_group():
    sample = sample_limit_set(cyclic_group(), 5)
    eq(sample.method, 'fixed_points')
    eq(len(sample), 2)
    eq(len(sample), len(sample.words))
    eq(sample.at_infinity, 1)
    assert_allclose(sample.finite_points(), [0])
    values = sample.values()
    eq(sum(1 for z in values if z is INFINITY), 1)


def test_limit_set_depth():
    assert_raises(ValueError, sample_limit_set, four_circle_group(), 0)


def test_limit_points_are_near_disks():
    G = four_circle_group()
    points = schottky.limit_points(G, 4)
    eq(len(points), 4 * 3 ** 3)
    _, centers, radii = depth_disks(G, 3)
    d = np.abs(points[:, None] - centers[None, :]) - radii[None, :]
    assert (d.min(axis=1) <= 1e-9).all()


def test_fixtures_verify():
    for G in (rank_one_group(), four_circle_group(), four_circle_group(1.9),
              fuchsian_group(2.0), near_tangent_grid()):
        verify_classical_domain(G.generators, G.pairing)
    eq(near_tangent_grid().rank, 8)


def test_fuchsian_group_is_real():
    G = fuchsian_group(2.0)
    for f in G.generators:
        entries = f.as_array().ravel()
        assert (np.abs(entries.imag) < 1e-12).all() or \
            (np.abs(entries.real) < 1e-12).all()


def test_random_pairings_verify():
    rng = np.random.default_rng(10)
    for _ in range(20):
        G = schottky.random_circle_pairing(rng)
        eq(G.rank, 2)
        assert G.pairing is not None


def test_random_group():
    rng = np.random.default_rng(11)
    G = schottky.random_group(rng)
    eq(G.rank, 2)
    for f in G.generators:
        k = abs(moebius.multiplier(f))
        assert 1.5 - 1e-9 <= k <= 20 + 1e-9
        a, r = moebius.fixed_points(f)
        assert abs(a) < 5 and abs(r) < 5


def test_pairing_margin():
    G = four_circle_group()
    assert_allclose(G.pairing.margin(), 3 * math.sqrt(2) - 2)


def test_conjugated_group_keeps_domain():
    G = four_circle_group()
    u = MoebiusMap(1, 1 + 0.5j, 0, 1)
    H = G.conjugated(u)
    assert_allclose(H.pairing.circle(1).center, -2 + 0.5j)
    verify_classical_domain(H.generators, H.pairing)


def test_json_round_trip():
    G = four_circle_group()
    H = group_from_json(G.to_json())
    eq(H.generators, G.generators)
    eq(H.pairing.circles, G.pairing.circles)


def test_json_errors():
    G = four_circle_group()
    data = G.to_json()
    e = assert_raises(GroupParseError, group_from_json, {'rank': 1})
    eq(e.field, 'generators')
    e = assert_raises(GroupParseError, group_from_json,
                      dict(data, rank=3))
    eq(e.field, 'rank')
    e = assert_raises(GroupParseError, group_from_json,
                      dict(data, circles=data['circles'][:3]))
    eq(e.field, 'circles')
    circles = list(data['circles'])
    circles[1] = {'center': [0, 0]}
    e = assert_raises(GroupParseError, group_from_json,
                      dict(data, circles=circles))
    eq(e.field, 'circles[1]')
    e = assert_raises(GroupParseError, group_from_json, [])
    eq(e.field, '$')
