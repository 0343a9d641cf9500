import math

import numpy as np
from nose.tools import eq_ as eq
from numpy.testing import assert_allclose

from schottkylab import classicality, moebius
from schottkylab.classicality import COLLAPSING, DEGENERATION, TANGENCY, \
    DomainSequence, candidate_pairings, classify_domain_sequence, \
    deform_toward_classical, domain_sequence_from_groups, scramble, \
    search_classical_generators, verify_classical_domain
from schottkylab.dimension import DimensionEstimate, EXPONENT, \
    estimate_dimension
from schottkylab.errors import DisjointnessViolation, \
    InconsistentSequence, NonLoxodromicError, OrientationViolation, \
    PairingViolation
from schottkylab.geometry import Circle, DegeneratePoint
from schottkylab.moebius import MoebiusMap
from schottkylab.schottky import SchottkyGroup, four_circle_group, \
    random_circle_pairing, random_group, rank_one_group, word_to_map

from .util import assert_raises

FAR = [Circle(10, 1), Circle(20, 1)]


def test_verify_four_circle_group():
    G = four_circle_group()
    certificate = verify_classical_domain(G.generators, G.pairing)
    assert not certificate.error
    assert_allclose(certificate.margin, 3 * math.sqrt(2) - 2)
    eq(sorted(certificate.to_json()),
       ['circles', 'depth', 'generators', 'margin'])


def test_verify_needs_matching_counts():
    G = four_circle_group()
    assert_raises(ValueError, verify_classical_domain, G.generators[:1],
                  G.pairing)


def test_verify_rejects_overlap():
    f = rank_one_group().generators[0]
    e = assert_raises(DisjointnessViolation, verify_classical_domain, [f],
                      [Circle(-3, 1), Circle(-2, 1)])
    eq(e.index, (1, 2))


def test_verify_rejects_wrong_image():
    G = four_circle_group()
    a, b = G.generators
    e = assert_raises(PairingViolation, verify_classical_domain,
                      [moebius.inverse(a), b], G.pairing)
    eq(e.index, 1)


def test_verify_rejects_wrong_orientation():
    translation = MoebiusMap(1, 6, 0, 1)
    e = assert_raises(OrientationViolation, verify_classical_domain,
                      [translation], [Circle(-3, 1), Circle(3, 1)])
    eq(e.index, 1)


def test_candidate_pairings_are_paired():
    f = four_circle_group().generators[0]
    pairs = candidate_pairings(f)
    assert pairs
    for source, target in pairs:
        image = classicality.image_circle(f, source)
        assert image.isclose(target, 1e-6)


def test_search_accepts_classical_generators():
    result = search_classical_generators(four_circle_group())
    assert not result.error
    eq(result.depth, 0)
    eq(result.words, ((1,), (2,)))
    assert result.margin > 0


def test_search_undoes_a_nielsen_move():
    G = four_circle_group()
    a, b = G.generators
    H = SchottkyGroup([a * b, b], verify=False)
    result = search_classical_generators(H, budget=500)
    assert not result.error, result
    verify_classical_domain(result.generators, result.pairing)
    assert result.group.rank == 2


def test_search_budget():
    G = four_circle_group()
    a, b = G.generators
    H = SchottkyGroup([a * b, b], verify=False)
    report = search_classical_generators(H, budget=0)
    assert report.error
    eq(report.visited, 0)
    eq(report.to_json()['status'], 'budget exhausted')


def test_search_needs_loxodromic_generators():
    assert_raises(NonLoxodromicError, search_classical_generators,
                  [MoebiusMap(1, 1, 0, 1), MoebiusMap(2, 0, 0, 0.5)])


def test_scramble_keeps_words():
    G = four_circle_group()
    rng = np.random.default_rng(7)
    H, words = scramble(G, rng, moves=3)
    eq(H.rank, 2)
    for f, w in zip(H.generators, words):
        assert_allclose(abs(moebius.multiplier(f)),
                        abs(moebius.multiplier(word_to_map(G, w))),
                        rtol=1e-8)


def _steps(count, make):
    return [make(n) for n in range(1, count + 1)]


def test_tangency():
    steps = _steps(10, lambda n: [Circle(0, 1), Circle(2 + 1.0 / n, 1)] + FAR)
    report = classify_domain_sequence(DomainSequence(steps))
    eq(report.kind, TANGENCY)
    eq(report.indices, (1, 2))
    assert_allclose(report.point, 1)


def test_geometric_tangency():
    steps = _steps(12, lambda n: [Circle(0, 1), Circle(2 + 2.0 ** -n, 1)]
                   + FAR)
    eq(classify_domain_sequence(steps).kind, TANGENCY)


def test_degeneration():
    steps = _steps(10, lambda n: [Circle(0, 1), Circle(5, 1.0 / n)] + FAR)
    report = classify_domain_sequence(DomainSequence(steps))
    eq(report.kind, DEGENERATION)
    eq(report.indices, (2,))
    assert_allclose(report.point, 5)


def test_degenerate_point_entry():
    steps = [[Circle(0, 1), Circle(5, r)] + FAR for r in (1, 0.5)]
    steps.append([Circle(0, 1), DegeneratePoint(5)] + FAR)
    eq(classify_domain_sequence(steps).kind, DEGENERATION)


def test_concentric_collapse():
    steps = _steps(10, lambda n: [Circle(0, 1), Circle(0, 1 + 1.0 / n)]
                   + FAR)
    report = classify_domain_sequence(DomainSequence(steps))
    eq(report.kind, COLLAPSING)
    eq(report.indices, (1, 2))
    assert_allclose(report.circle.radius, 1)


def test_constant_sequence():
    G = four_circle_group()
    report = classify_domain_sequence(domain_sequence_from_groups([G] * 4))
    eq(report.kind, None)
    eq(report.to_json()['kind'], 'None')


def test_receding_circles():
    steps = _steps(10, lambda n: [Circle(0, 1), Circle(3 - 1.0 / n, 1)]
                   + FAR)
    eq(classify_domain_sequence(steps).kind, None)


def test_sequence_preconditions():
    assert_raises(InconsistentSequence, DomainSequence,
                  [[Circle(0, 1)], [Circle(0, 1), Circle(3, 1)]])
    steps = [[Circle(0, 1), Circle(3, 1)]] * 2
    assert_raises(ValueError, classify_domain_sequence, steps)


def test_sequence_from_json():
    data = [[{'center': [0, 0], 'radius': 1}, {'center': [5, 0],
                                               'radius': 0}]] * 3
    seq = DomainSequence.from_json(data)
    eq(len(seq), 3)
    assert isinstance(seq.steps[0][1], DegeneratePoint)


def _fake_estimator(G):
    return DimensionEstimate(0.5, EXPONENT, 4, 0.0)


def test_deform_classical_group():
    G = four_circle_group()
    trace = deform_toward_classical(G, estimator=_fake_estimator)
    eq(len(trace), 1)
    assert trace[0].certified
    eq(trace[0].factor, 1.0)


def _with_margin(margin, func, *args, **kwargs):
    saved = classicality.CERTIFIED_MARGIN
    classicality.CERTIFIED_MARGIN = margin
    try:
        return func(*args, **kwargs)
    finally:
        classicality.CERTIFIED_MARGIN = saved


def test_deform_stops_after_steps():
    G = four_circle_group(2.1)
    trace = _with_margin(1e9, deform_toward_classical, G, steps=3,
                         budget=5, estimator=_fake_estimator)
    eq(len(trace), 4)
    assert not any(step.certified for step in trace)
    assert_allclose([step.factor for step in trace],
                    [1, 1.1, 1.1 ** 2, 1.1 ** 3])


def test_deform_until_certified():
    G = four_circle_group(2.1)
    start = search_classical_generators(G, budget=5)
    assert not start.error
    trace = _with_margin(start.margin + 0.01, deform_toward_classical, G,
                         steps=20, budget=5, estimator=_fake_estimator)
    assert len(trace) > 1
    assert trace[-1].certified
    assert not trace[0].certified


def test_deform_keeps_fixed_points():
    rng = np.random.default_rng(3)
    G = random_group(rng)
    trace = _with_margin(1e9, deform_toward_classical, G, steps=2, budget=5,
                         estimator=_fake_estimator)
    for step in trace[1:]:
        for f, g in zip(G.generators, step.group.generators):
            for p, q in zip(moebius.fixed_points(f), moebius.fixed_points(g)):
                assert_allclose(p, q, atol=1e-8)
            assert abs(moebius.multiplier(g)) > abs(moebius.multiplier(f))


def test_deform_halves_large_steps():
    values = iter([0.2, 0.9, 0.5, 0.22])

    def estimator(G):
        return DimensionEstimate(next(values), EXPONENT, 4, 0.0)
    trace = _with_margin(1e9, deform_toward_classical, four_circle_group(),
                         steps=1, budget=5, estimator=estimator)
    eq(len(trace), 2)
    assert_allclose(trace[1].factor, 1.025)
    assert_allclose(trace[1].estimate.value, 0.22)


def test_candidate_pairings_include_isometric_circles():
    f = four_circle_group().generators[0]
    pole = -f.d / f.c
    radius = 1 / abs(f.c)
    pairs = candidate_pairings(f)
    assert any(abs(source.center - pole) < 1e-9 and
               abs(source.radius - radius) < 1e-9 for source, _ in pairs)


def test_search_recovers_scrambled_pairings():
    for i in range(20):
        rng = np.random.default_rng(100 + i)
        G = random_circle_pairing(rng)
        H, words = scramble(G, rng, 3)
        result = search_classical_generators(H, budget=100000)
        assert not result.error, (i, result)
        verify_classical_domain(result.generators, result.pairing)
        eq(result.group.rank, 2)


def _exponent(G):
    return estimate_dimension(G, EXPONENT, depth=6)


def test_deform_lowers_the_dimension():
    G = four_circle_group(2.1)
    trace = _with_margin(1e9, deform_toward_classical, G, steps=4, budget=5,
                         estimator=_exponent)
    eq(len(trace), 5)
    values = [step.estimate.value for step in trace]
    for before, after in zip(values, values[1:]):
        assert after <= before + 1e-6, values
    assert values[-1] < values[0]
