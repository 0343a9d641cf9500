# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Writers for experiment results: JSON documents, CSV tables and SVG
renders. Every file starts with the configuration that produced it;
nothing time-dependent is written, so reruns are byte-identical.
"""

import csv
import io
import json
import logging

import numpy as np

import matplotlib
matplotlib.use('Agg')
from matplotlib.collections import PatchCollection
from matplotlib.figure import Figure
from matplotlib.patches import Circle as CirclePatch

from . import moebius
from .dimension import shell_sums
from .lab import VERSION

log = logging.getLogger('schottkylab')

__all__ = [
    'ResultEncoder', 'dumps', 'write_json', 'write_limit_set', 'write_curve',
    'write_partial_sums', 'write_deformation', 'render_svg', 'svg_header',
    'LAYERS', 'S_GRID',
    ]

LAYERS = ('circles', 'limitset', 'curve')

# Exponents at which the Poincare partial sums are tabulated
S_GRID = np.linspace(0.0, 2.0, 41)

# Points drawn per circular arc of a rendered curve
ARC_POINTS = 16


class ResultEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        if isinstance(o, np.ndarray):
            return o.tolist()
        if hasattr(o, 'to_json'):
            return o.to_json()
        return super(ResultEncoder, self).default(o)


def _snapshot(config):
    return config.snapshot() if config is not None else {}


def dumps(payload, config=None):
    document = {'config': _snapshot(config), 'result': payload}
    return json.dumps(document, cls=ResultEncoder, indent=2,
                      sort_keys=True)


def write_json(payload, fileobj, config=None):
    fileobj.write(dumps(payload, config))
    fileobj.write('\n')


def _csv_header(fileobj, config):
    fileobj.write('# schottkylab %s\n' % json.dumps(_snapshot(config),
                                                      sort_keys=True))


def write_limit_set(sample, fileobj, config=None):
    _csv_header(fileobj, config)
    writer = csv.writer(fileobj, lineterminator='\n')
    writer.writerow(['re', 'im', 'word'])
    for z, label in zip(sample.values(), sample.word_labels()):
        if z is moebius.INFINITY:
            writer.writerow(['inf', 'inf', label])
        else:
            writer.writerow([repr(z.real), repr(z.imag), label])


def write_curve(curve, fileobj, config=None):
    _csv_header(fileobj, config)
    curve.to_csv(fileobj)


def write_partial_sums(G, depth, fileobj, config=None, s_values=S_GRID):
    _csv_header(fileobj, config)
    sums = shell_sums(G, s_values, depth).sum(axis=1)
    writer = csv.writer(fileobj, lineterminator='\n')
    writer.writerow(['s', 'partial_sum'])
    for s, total in zip(s_values, sums):
        writer.writerow([repr(float(s)), repr(float(total))])


def write_deformation(trace, fileobj, config=None):
    _csv_header(fileobj, config)
    writer = csv.writer(fileobj, lineterminator='\n')
    writer.writerow(['step', 'factor', 'dimension', 'certified',
                     'multipliers'])
    for i, step in enumerate(trace):
        moduli = ';'.join(repr(float(abs(moebius.multiplier(f))))
                          for f in step.group.generators)
        writer.writerow([i, repr(float(step.factor)),
                         repr(float(step.estimate.value)),
                         int(step.certified), moduli])


def _curve_points(curve):
    p = curve.pieces
    chunks = []
    for i in range(len(curve)):
        n = 1 if p.flat[i] else ARC_POINTS
        u = np.arange(n) / float(n)
        chunks.append(p.point_at(np.full(n, i), u))
    chunks.append(curve.starts[:1] if curve.closed else curve.ends[-1:])
    return np.concatenate(chunks)


def svg_header(config):
    """One-line comment naming the seed, depth and version of a render."""
    snapshot = _snapshot(config)
    return '<!-- schottkylab %s seed=%s depth=%s -->' % (
        snapshot.get('version', VERSION), snapshot.get('seed'),
        snapshot.get('depth'))


def _with_header(svg, config):
    # after the XML declaration, which must stay first
    head, sep, rest = svg.partition('?>\n')
    if not sep:
        return svg_header(config) + '\n' + svg
    return head + sep + svg_header(config) + '\n' + rest


def render_svg(fileobj, config=None, circles=None, points=None, curve=None,
               size=6.0):
    """
    Draw the requested layers into an SVG. Each layer is an SVG group
    whose id is its name in LAYERS.
    """
    fig = Figure(figsize=(size, size))
    ax = fig.add_subplot(1, 1, 1)
    ax.set_aspect('equal')
    ax.set_axis_off()
    if circles:
        patches = [CirclePatch((c.center.real, c.center.imag), c.radius)
                   for c in circles]
        collection = PatchCollection(patches, facecolor='none',
                                     edgecolor='0.4', linewidth=0.6)
        collection.set_gid('circles')
        ax.add_collection(collection)
    if points is not None and len(points):
        line, = ax.plot(points.real, points.imag, linestyle='none',
                        marker='.', markersize=1.0, color='k')
        line.set_gid('limitset')
    if curve is not None:
        z = _curve_points(curve)
        line, = ax.plot(z.real, z.imag, color='tab:red', linewidth=0.8)
        line.set_gid('curve')
    ax.autoscale_view()
    description = 'schottkylab %s' % json.dumps(_snapshot(config),
                                                 sort_keys=True)
    buf = io.StringIO()
    with matplotlib.rc_context({'svg.hashsalt': 'schottkylab',
                                'svg.fonttype': 'none'}):
        fig.savefig(buf, format='svg',
                    metadata={'Date': None, 'Description': description})
    fileobj.write(_with_header(buf.getvalue(), config))
    log.debug('rendered %s', ', '.join(
        name for name, layer in zip(LAYERS, (circles, points, curve))
        if layer is not None))
