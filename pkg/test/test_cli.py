import io
import json
import os

from nose.tools import eq_ as eq
from numpy.testing import assert_allclose

from schottkylab import errors
from schottkylab.cli import COMMANDS, main
from schottkylab.moebius import MoebiusMap
from schottkylab.schottky import SchottkyGroup

from .util import fixture, maketemp, write_group

FOUR_CIRCLE = fixture('four_circle.json')
CYCLIC = fixture('cyclic.json')


def run(*args):
    out = io.StringIO()
    code = main(['schottkylab'] + list(args), stdout=out)
    return code, out.getvalue()


def run_json(*args):
    code, text = run(*args)
    eq(code, errors.SUCCESS, text)
    return json.loads(text)


def test_commands():
    eq(sorted(COMMANDS), ['classical', 'deform', 'dim', 'frechet', 'group',
                          'limitset', 'quasicircle', 'render', 'singularity',
                          'theorem-check'])


def test_usage_errors():
    eq(run()[0], errors.INPUT_ERROR)
    eq(run('fourier', CYCLIC)[0], errors.INPUT_ERROR)
    eq(run('dim')[0], errors.INPUT_ERROR)
    eq(run('group', 'check', CYCLIC)[0], errors.INPUT_ERROR)


def test_option_errors():
    eq(run('--nonsense=1', 'dim', CYCLIC)[0], errors.INPUT_ERROR)
    eq(run('--method=fourier', 'dim', CYCLIC)[0], errors.INPUT_ERROR)
    eq(run('--budget=0', 'classical', CYCLIC)[0], errors.INPUT_ERROR)


def test_group_validate():
    document = run_json('group', 'validate', FOUR_CIRCLE)
    result = document['result']
    eq(result['name'], 'four-circle')
    eq(result['rank'], 2)
    eq(result['classes'], ['loxodromic', 'loxodromic'])
    assert_allclose(result['margin'], 3 * 2 ** 0.5 - 2)
    eq(document['config']['method'], 'exponent')


def test_bad_documents():
    for name in ('malformed.json', 'empty.json', 'three_circles.json',
                 'missing.json'):
        code, text = run('group', 'validate', fixture(name))
        eq(code, errors.INPUT_ERROR, name)
        eq(text, '')


def test_dim():
    result = run_json('dim', CYCLIC)['result']
    eq(result['method'], 'Exponent')
    assert result['value'] <= 0.05


def test_dim_needs_pairing():
    eq(run('--method=transfer', 'dim', CYCLIC)[0], errors.INPUT_ERROR)


def test_dim_writes_partial_sums():
    tmp = maketemp('cli_dim')
    path = os.path.join(tmp, 'sums.csv')
    document = run_json('--depth=5', '--out=%s' % path, 'dim', FOUR_CIRCLE)
    eq(document['result']['depth'], 5)
    with open(path) as f:
        lines = f.read().splitlines()
    assert lines[0].startswith('# schottkylab {')
    eq(lines[1], 's,partial_sum')
    eq(len(lines), 2 + 41)


def test_limitset():
    tmp = maketemp('cli_limitset')
    path = os.path.join(tmp, 'points.csv')
    result = run_json('limitset', FOUR_CIRCLE, '--depth=3',
                      '--out=%s' % path)['result']
    eq(result['count'], 36)
    eq(result['method'], 'disks')
    with open(path) as f:
        lines = f.read().splitlines()
    eq(lines[1], 're,im,word')
    eq(len(lines), 2 + 36)


def test_limitset_of_cyclic_group():
    result = run_json('limitset', CYCLIC)['result']
    eq(result['count'], 2)
    eq(result['at_infinity'], 1)


def test_quasicircle_and_frechet():
    tmp = maketemp('cli_quasicircle')
    path = os.path.join(tmp, 'curve.csv')
    result = run_json('quasicircle', FOUR_CIRCLE, '--depth=2',
                      '--out=%s' % path)['result']
    eq(result['depth'], 2)
    assert result['simple']
    eq(result['flags']['linear'], True)
    result = run_json('frechet', path, path)['result']
    assert_allclose(result['distance'], 0, atol=1e-9)
    eq(result['length_term'], True)
    result = run_json('--classic', 'frechet', path, path)['result']
    eq(result['length_term'], False)


def test_quasicircle_needs_pairing():
    eq(run('quasicircle', CYCLIC)[0], errors.INPUT_ERROR)


def test_classical():
    result = run_json('classical', FOUR_CIRCLE)['result']
    eq(result['depth'], 0)
    assert result['margin'] > 0


def test_classical_budget_exhausted():
    tmp = maketemp('cli_classical')
    commuting = SchottkyGroup([MoebiusMap(2, 0, 0, 0.5),
                               MoebiusMap(3, 0, 0, 1 / 3.0)])
    path = write_group(tmp, 'commuting.json', commuting)
    code, text = run('--budget=5', 'classical', path)
    eq(code, errors.BUDGET_EXHAUSTED)
    eq(json.loads(text)['result']['status'], 'budget exhausted')


def _write_sequence(path, steps):
    data = {'steps': [[{'center': [c.real, c.imag], 'radius': r}
                       for c, r in step] for step in steps]}
    with open(path, 'w') as f:
        json.dump(data, f)


def test_singularity():
    tmp = maketemp('cli_singularity')
    path = os.path.join(tmp, 'tangency.json')
    far = [(10, 1), (20, 1)]
    _write_sequence(path, [[(0j, 1), (2 + 1.0 / n, 1)] + far
                           for n in range(1, 11)])
    result = run_json('singularity', path)['result']
    eq(result['kind'], 'Tangency')
    eq(result['indices'], [1, 2])


def test_singularity_bad_sequence():
    tmp = maketemp('cli_singularity_bad')
    path = os.path.join(tmp, 'bad.json')
    with open(path, 'w') as f:
        json.dump({'steps': 3}, f)
    eq(run('singularity', path)[0], errors.INPUT_ERROR)
    eq(run('singularity', fixture('malformed.json'))[0], errors.INPUT_ERROR)


def test_deform():
    tmp = maketemp('cli_deform')
    path = os.path.join(tmp, 'trace.csv')
    result = run_json('deform', FOUR_CIRCLE, '--steps=2', '--budget=20',
                      '--out=%s' % path)['result']
    eq(result['steps'], 0)
    eq(result['certified'], True)
    with open(path) as f:
        lines = f.read().splitlines()
    eq(lines[1], 'step,factor,dimension,certified,multipliers')
    eq(len(lines), 3)


def test_theorem_check():
    result = run_json('theorem-check', '--samples=2', '--threshold=0.0',
                      '--deterministic')['result']
    eq(result['samples'], 2)
    eq(result['kept'], 0)
    assert result['success_fraction'] is None


def test_render_layers():
    tmp = maketemp('cli_render')
    circles = os.path.join(tmp, 'circles.svg')
    eq(run('render', FOUR_CIRCLE, '--what=circles', '--out=%s' % circles)[0],
       errors.SUCCESS)
    with open(circles) as f:
        svg = f.read()
    assert 'id="circles"' in svg
    assert 'id="limitset"' not in svg
    assert 'schottkylab' in svg

    code, svg = run('render', FOUR_CIRCLE, '--what=limitset', '--depth=3')
    eq(code, errors.SUCCESS)
    assert 'id="circles"' in svg
    assert 'id="limitset"' in svg


def test_render_quasicircle():
    code, svg = run('render', FOUR_CIRCLE, '--what=quasicircle',
                    '--depth=1')
    eq(code, errors.SUCCESS)
    assert 'id="curve"' in svg


def test_render_is_reproducible():
    first = run('render', FOUR_CIRCLE, '--depth=3')[1]
    second = run('render', FOUR_CIRCLE, '--depth=3')[1]
    eq(first, second)


def test_render_unknown_layer():
    eq(run('render', FOUR_CIRCLE, '--what=everything')[0],
       errors.INPUT_ERROR)


def test_render_header_comment():
    code, svg = run('render', FOUR_CIRCLE, '--depth=3', '--seed=11')
    eq(code, errors.SUCCESS)
    assert '<!-- schottkylab ' in svg
    assert 'seed=11 depth=3 -->' in svg
    assert svg.index('<!-- schottkylab') < svg.index('<svg')


def test_outdir():
    tmp = os.path.join(maketemp('cli_outdir'), 'runs')
    eq(run('render', FOUR_CIRCLE, '--what=circles', '--out=circles.svg',
           '--outdir=%s' % tmp)[0], errors.SUCCESS)
    assert os.path.exists(os.path.join(tmp, 'circles.svg'))
