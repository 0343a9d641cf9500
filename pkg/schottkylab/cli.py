# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""
Command-line front end.

Options use tornado's ``--name=value`` syntax and may appear anywhere
on the command line; everything else is the subcommand and its
arguments::

    schottkylab --depth=8 dim group.json
    schottkylab render group.json --what=quasicircle --out=curve.svg
"""

import json
import logging
import os
import sys

import tornado.ioloop
import tornado.options
from tornado.log import define_logging_options

from . import errors, moebius
from .classicality import DomainSequence
from .curves import PolyCurve, classify_quasicircle, is_invariant, \
    is_simple, quasicircle_length_estimate
from .dimension import EXPONENT, default_depth
from .emit import render_svg, write_curve, write_deformation, write_json, \
    write_limit_set, write_partial_sums
from .errors import GroupParseError
from .lab import ExperimentConfig, Lab, define_options, load

log = logging.getLogger('schottkylab')

__all__ = ['main', 'COMMANDS']

USAGE = """\
usage: schottkylab [--option=value ...] COMMAND [ARGS]

commands:
  group validate FILE     parse a group document and print a summary
  dim FILE                Hausdorff dimension estimate (--method, --depth)
  limitset FILE           limit-set sample (--depth, --out=CSV)
  quasicircle FILE        truncated quasi-circle (--depth, --out=CSV)
  frechet CSV1 CSV2       Frechet distance between two curves (--classic)
  classical FILE          search for classical generators (--budget)
  singularity FILE        classify a sequence of fundamental domains
  deform FILE             deformation path (--steps, --budget, --out=CSV)
  theorem-check           classicality of random low-dimension groups
  render FILE             SVG figure (--what, --depth, --out=SVG)

output files named by a relative --out go under --outdir when given
"""

COMMANDS = {}


def command(name, nargs):
    def register(func):
        COMMANDS[name] = (func, nargs)
        return func
    return register


class UsageError(ValueError):
    pass


def _run(config, method, *args, **kwargs):
    """Run one Lab experiment on a private IOLoop and return the response."""
    io_loop = tornado.ioloop.IOLoop()
    lab = Lab(config, io_loop=io_loop)
    responses = []

    def _callback(response):
        responses.append(response)
        io_loop.stop()

    getattr(lab, method)(*args, callback=_callback, **kwargs)
    if not responses:
        io_loop.start()
    lab.close()
    io_loop.close()
    response = responses[0]
    if response.error:
        log.error('%s', response)
    return response


class _Output(object):
    """``--out`` file when given, the fallback stream otherwise."""

    def __init__(self, path, fallback):
        self.path = path
        self.fallback = fallback

    def __enter__(self):
        if self.path is None:
            return self.fallback
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.f = open(self.path, 'w', newline='')
        return self.f

    def __exit__(self, *exc):
        if self.path is not None:
            self.f.close()


@command('group', 2)
def cmd_group(config, args, stdout):
    if args[0] != 'validate':
        raise UsageError('unknown group subcommand %r' % args[0])
    document = load(args[1])
    G = document.group
    summary = {
        'name': document.name,
        'rank': G.rank,
        'classes': [moebius.classify(f) for f in G.generators],
        'metadata': dict(document),
        }
    if G.pairing is not None:
        summary['margin'] = G.pairing.margin()
    write_json(summary, stdout, config)
    return errors.SUCCESS


@command('dim', 1)
def cmd_dim(config, args, stdout):
    G = load(args[0]).group
    response = _run(config, 'dimension', G)
    if response.error:
        return response.errno
    write_json(response.content.to_json(), stdout, config)
    if config.out is not None:
        depth = config.depth or default_depth(
            G, EXPONENT, config.depth_cap(EXPONENT))
        with _Output(config.output_path(), stdout) as f:
            write_partial_sums(G, depth, f, config)
    return errors.SUCCESS


@command('limitset', 1)
def cmd_limitset(config, args, stdout):
    G = load(args[0]).group
    response = _run(config, 'limit_set', G)
    if response.error:
        return response.errno
    sample = response.content
    write_json({'count': len(sample), 'method': sample.method,
                'at_infinity': sample.at_infinity}, stdout, config)
    if config.out is not None:
        with _Output(config.output_path(), stdout) as f:
            write_limit_set(sample, f, config)
    return errors.SUCCESS


@command('quasicircle', 1)
def cmd_quasicircle(config, args, stdout):
    G = load(args[0]).group
    response = _run(config, 'quasicircle', G)
    if response.error:
        return response.errno
    zeta, curve = response.content
    summary = {
        'depth': curve.depth,
        'pieces': len(curve),
        'length': curve.length,
        'simple': is_simple(curve),
        'invariant': is_invariant(G, curve),
        'flags': classify_quasicircle(G, curve),
        'estimate': quasicircle_length_estimate(G, zeta,
                                                curve.depth).to_json(),
        }
    write_json(summary, stdout, config)
    if config.out is not None:
        with _Output(config.output_path(), stdout) as f:
            write_curve(curve, f, config)
    return errors.SUCCESS


def _read_curve(path):
    with open(path, newline='') as f:
        return PolyCurve.from_csv(f)


@command('frechet', 2)
def cmd_frechet(config, args, stdout):
    c1, c2 = _read_curve(args[0]), _read_curve(args[1])
    response = _run(config, 'frechet', c1, c2)
    if response.error:
        return response.errno
    write_json({'distance': response.content,
                'length_term': not config.classic}, stdout, config)
    return errors.SUCCESS


@command('classical', 1)
def cmd_classical(config, args, stdout):
    G = load(args[0]).group
    response = _run(config, 'classical', G)
    if response.error:
        return response.errno
    result = response.content
    write_json(result.to_json(), stdout, config)
    if result.error:
        log.warning('no classical generators within budget %d',
                    config.budget)
        return errors.BUDGET_EXHAUSTED
    return errors.SUCCESS


def _read_sequence(path):
    with open(path) as f:
        try:
            data = json.load(f)
        except ValueError as e:
            raise GroupParseError(getattr(e, 'msg', str(e)),
                                  line=getattr(e, 'lineno', None))
    if isinstance(data, dict):
        data = data.get('steps')
    if not isinstance(data, list):
        raise GroupParseError('expected a list of steps', field='steps')
    try:
        return DomainSequence.from_json(data)
    except (KeyError, TypeError, IndexError):
        raise GroupParseError('expected steps of {"center": [re, im], '
                              '"radius": r}', field='steps')


@command('singularity', 1)
def cmd_singularity(config, args, stdout):
    seq = _read_sequence(args[0])
    response = _run(config, 'singularity', seq)
    if response.error:
        return response.errno
    write_json(response.content.to_json(), stdout, config)
    return errors.SUCCESS


@command('deform', 1)
def cmd_deform(config, args, stdout):
    G = load(args[0]).group
    response = _run(config, 'deform', G)
    if response.error:
        return response.errno
    trace = response.content
    last = trace[-1]
    summary = {
        'steps': len(trace) - 1,
        'factor': last.factor,
        'dimension': [step.estimate.value for step in trace],
        'certified': last.certified,
        'certificate': last.certificate.to_json() if last.certified
        else None,
        }
    write_json(summary, stdout, config)
    if config.out is not None:
        with _Output(config.output_path(), stdout) as f:
            write_deformation(trace, f, config)
    if not last.certified:
        return errors.NOT_CONVERGED
    return errors.SUCCESS


@command('theorem-check', 0)
def cmd_theorem_check(config, args, stdout):
    response = _run(config, 'theorem_check')
    if response.error:
        return response.errno
    report = response.content
    log.info('%d of %d kept samples certified', report['certified'],
             report['kept'])
    write_json(report, stdout, config)
    return errors.SUCCESS


@command('render', 1)
def cmd_render(config, args, stdout):
    G = load(args[0]).group
    if config.what not in ('limitset', 'quasicircle', 'circles'):
        raise UsageError('--what must be limitset, quasicircle or circles')
    circles = G.pairing.circles if G.pairing is not None else None
    points = curve = None
    if config.what == 'limitset':
        response = _run(config, 'limit_set', G)
        if response.error:
            return response.errno
        points = response.content.finite_points()
    elif config.what == 'quasicircle':
        response = _run(config, 'quasicircle', G)
        if response.error:
            return response.errno
        curve = response.content[1]
    with _Output(config.output_path(), stdout) as f:
        render_svg(f, config, circles=circles, points=points, curve=curve)
    return errors.SUCCESS


def _parse(argv):
    """Split argv into tornado options and positionals and parse them."""
    flags = [a for a in argv[1:] if a.startswith('--')]
    positionals = [a for a in argv[1:] if not a.startswith('--')]
    parser = define_options()
    define_logging_options(parser)
    parser.parse_command_line(argv[:1] + flags, final=False)
    if parser.config:
        parser.parse_config_file(parser.config, final=False)
        parser.parse_command_line(argv[:1] + flags, final=False)
    parser.run_parse_callbacks()
    return ExperimentConfig(parser), positionals


def main(argv=None, stdout=None):
    if argv is None:
        argv = sys.argv
    if stdout is None:
        stdout = sys.stdout
    try:
        config, args = _parse(argv)
    except (tornado.options.Error, ValueError, IOError) as e:
        log.error('%s', e)
        return errors.INPUT_ERROR
    if not args or args[0] not in COMMANDS:
        sys.stderr.write(USAGE)
        return errors.INPUT_ERROR
    func, nargs = COMMANDS[args[0]]
    args = args[1:]
    if len(args) != nargs:
        log.error('%s takes %d argument%s, got %d', func.__name__[4:],
                  nargs, '' if nargs == 1 else 's', len(args))
        return errors.INPUT_ERROR
    try:
        return func(config, args, stdout)
    except errors.SchottkyLabError as e:
        log.error('%s', e)
        return errors.errno_for(e)
    except (ValueError, IOError) as e:
        log.error('%s', e)
        return errors.INPUT_ERROR
