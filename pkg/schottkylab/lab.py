# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

"""Asynchronous experiment driver for tornado"""

import collections.abc
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import tornado.ioloop
from tornado.options import OptionParser

from . import errors
from .classicality import classify_domain_sequence, \
    deform_toward_classical, search_classical_generators
from .curves import build_quasicircle, default_generating_curve, \
    frechet_distance
from .dimension import BOXCOUNT, DEPTH_CAPS, EXPONENT, EXPONENT_TOLERANCE, \
    TRANSFER, TRANSFER_TOLERANCE, estimate_dimension
from .errors import GroupParseError, SchottkyLabError
from .schottky import group_from_json, random_group, sample_limit_set

log = logging.getLogger('schottkylab')

VERSION = '0.1.0'

__all__ = [
    'VERSION', 'LabError', 'LabErrorResponse', 'LabObject', 'LabResult',
    'GroupDocument', 'loads', 'load', 'dumps', 'ExperimentConfig',
    'define_options', 'Lab', 'METHOD_NAMES', 'theorem_sample',
    ]

METHOD_NAMES = {
    'exponent': EXPONENT,
    'transfer': TRANSFER,
    'boxcount': BOXCOUNT,
    }

# Attempts at drawing a usable random group per theorem-check sample
SAMPLE_ATTEMPTS = 10


class LabError(object):
    """
    A common error class denoting an error that has happened
    """
    error = True


class LabErrorResponse(LabError):
    def __init__(self, errno, msg):
        self.error = True
        self.errno = errno
        self.msg = msg

    def __str__(self):
        return 'Experiment failed: %s (%d)' % (self.msg, self.errno)


class LabObject(object):
    error = False


class LabResult(LabObject):
    def __init__(self, data):
        self.content = data
        super(LabResult, self).__init__()


def _error_response(exc):
    return LabErrorResponse(errors.errno_for(exc), str(exc))


# Group documents

_SCHEMA_KEYS = ('rank', 'generators', 'circles')


class GroupDocument(collections.abc.Mapping):
    """
    A parsed group file. The mapping holds the metadata keys (name,
    provenance, anything else that is not part of the group itself).
    """

    def __init__(self, group, metadata=None):
        self.group = group
        self.data = dict(metadata or {})

    def __len__(self):
        return len(self.data)

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, key):
        return self.data[key]

    @property
    def name(self):
        return self.data.get('name')

    def raw(self):
        result = dict(self.data)
        result.update(self.group.to_json())
        return result


def loads(text):
    if not text.strip():
        raise GroupParseError('empty document', line=1)
    try:
        data = json.loads(text)
    except ValueError as e:
        raise GroupParseError(getattr(e, 'msg', str(e)),
                              line=getattr(e, 'lineno', None))
    group = group_from_json(data)
    metadata = dict((k, v) for k, v in data.items() if k not in _SCHEMA_KEYS)
    return GroupDocument(group, metadata)


def load(path):
    with open(path) as f:
        return loads(f.read())


def dumps(document):
    return json.dumps(document.raw(), indent=2, sort_keys=True)


# Configuration

def _env_threads():
    """SCHOTTKY_LAB_THREADS as a positive int, or None when unset."""
    value = os.environ.get('SCHOTTKY_LAB_THREADS')
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            log.warning('Ignoring SCHOTTKY_LAB_THREADS=%r', value)
    return None


def define_options(parser=None):
    if parser is None:
        parser = OptionParser()
    parser.define('config', type=str, default=None,
                  help='python-syntax file with option values')
    parser.define('depth', type=int, default=None,
                  help='truncation depth (default: per method)')
    parser.define('exponent_depth', type=int, default=DEPTH_CAPS[EXPONENT],
                  help='largest default depth of the exponent estimator')
    parser.define('transfer_depth', type=int, default=DEPTH_CAPS[TRANSFER],
                  help='largest default depth of the transfer estimator')
    parser.define('boxcount_depth', type=int, default=DEPTH_CAPS[BOXCOUNT],
                  help='largest default depth of box counting')
    parser.define('exponent_tolerance', type=float,
                  default=EXPONENT_TOLERANCE,
                  help='bisection tolerance of the exponent estimator')
    parser.define('transfer_tolerance', type=float,
                  default=TRANSFER_TOLERANCE,
                  help='bisection tolerance of the transfer estimator')
    parser.define('method', type=str, default='exponent',
                  help='dimension estimator: exponent, transfer or boxcount')
    parser.define('budget', type=int, default=10000,
                  help='node budget of the classical generator search')
    parser.define('seed', type=int, default=0,
                  help='seed for random group sampling')
    parser.define('deterministic', type=bool, default=False,
                  help='single worker, reproducible output')
    parser.define('threads', type=int, default=_env_threads() or
                  os.cpu_count() or 1,
                  help='worker threads, capped by SCHOTTKY_LAB_THREADS')
    parser.define('out', type=str, default=None, help='output file')
    parser.define('outdir', type=str, default=None,
                  help='directory for relative --out paths')
    parser.define('samples', type=int, default=25,
                  help='number of random groups for theorem-check')
    parser.define('threshold', type=float, default=0.85,
                  help='dimension threshold for theorem-check')
    parser.define('steps', type=int, default=20,
                  help='maximum deformation steps')
    parser.define('what', type=str, default='limitset',
                  help='render layer: limitset, quasicircle or circles')
    parser.define('classic', type=bool, default=False,
                  help='frechet distance without the length term')
    return parser


class ExperimentConfig(object):
    """Read-only view of the options, with validation and a snapshot."""

    _SNAPSHOT = ('depth', 'method', 'budget', 'seed', 'deterministic',
                 'samples', 'threshold', 'steps', 'exponent_depth',
                 'transfer_depth', 'boxcount_depth', 'exponent_tolerance',
                 'transfer_tolerance')
    _DEPTH_CAPS = {
        EXPONENT: 'exponent_depth',
        TRANSFER: 'transfer_depth',
        BOXCOUNT: 'boxcount_depth',
        }

    def __init__(self, parser=None):
        if parser is None:
            parser = define_options()
        self._parser = parser
        self.validate()

    def __getattr__(self, name):
        if name.startswith('_'):
            raise AttributeError(name)
        try:
            return self._parser[name]
        except (KeyError, AttributeError):
            raise AttributeError(name)

    def validate(self):
        for name in ('budget', 'samples', 'steps', 'threads',
                     'exponent_depth', 'transfer_depth', 'boxcount_depth'):
            if self._parser[name] < 1:
                raise ValueError('--%s must be positive' % name)
        for name in ('exponent_tolerance', 'transfer_tolerance'):
            if not self._parser[name] > 0:
                raise ValueError('--%s must be positive' % name)
        if self.depth is not None and self.depth < 0:
            raise ValueError('--depth must not be negative')
        if self.method not in METHOD_NAMES:
            raise ValueError('--method must be one of %s'
                             % ', '.join(sorted(METHOD_NAMES)))

    @property
    def estimator(self):
        return METHOD_NAMES[self.method]

    def depth_cap(self, method):
        return self._parser[self._DEPTH_CAPS[method]]

    @property
    def workers(self):
        if self.deterministic:
            return 1
        cap = _env_threads()
        if cap is not None and self.threads > cap:
            log.info('Capping --threads=%d at SCHOTTKY_LAB_THREADS=%d',
                     self.threads, cap)
            return cap
        return self.threads

    def output_path(self):
        """--out, placed under --outdir when relative; None without --out."""
        if self.out is None:
            return None
        if self.outdir is None or os.path.isabs(self.out):
            return self.out
        return os.path.join(self.outdir, self.out)

    def snapshot(self):
        result = dict((name, self._parser[name]) for name in self._SNAPSHOT)
        result['version'] = VERSION
        return result


# Theorem check

def theorem_sample(seed, index, threshold, budget):
    """
    Draw one random rank-2 group and, when its dimension estimate is
    below ``threshold``, search it for classical generators.
    """
    rng = np.random.default_rng([seed, index])
    last_error = None
    for attempt in range(SAMPLE_ATTEMPTS):
        try:
            G = random_group(rng)
            estimate = estimate_dimension(G, EXPONENT)
        except (SchottkyLabError, ValueError, ArithmeticError) as e:
            log.warning('sample %d attempt %d rejected: %s',
                        index, attempt, e)
            last_error = e
            continue
        break
    else:
        return {'index': index, 'status': 'rejected', 'reason': str(last_error)}

    record = {
        'index': index,
        'dimension': estimate.value,
        'group': G.to_json(),
        }
    if estimate.value >= threshold:
        record['status'] = 'filtered'
        return record
    try:
        result = search_classical_generators(G, budget)
    except Exception as e:
        log.exception('sample %d: search crashed', index)
        record['status'] = 'failed'
        record['reason'] = '%s: %s' % (type(e).__name__, e)
        return record
    if result.error:
        record['status'] = 'failed'
        record['visited'] = result.visited
        record['best_cost'] = result.best_cost
    else:
        record['status'] = 'classical'
        record['depth'] = result.depth
        record['margin'] = result.margin
    return record


def _theorem_report(records, samples, threshold, budget, seed):
    kept = [r for r in records if r['status'] in ('classical', 'failed')]
    certified = [r for r in kept if r['status'] == 'classical']
    return {
        'samples': samples,
        'threshold': threshold,
        'budget': budget,
        'seed': seed,
        'kept': len(kept),
        'certified': len(certified),
        'rejected': len([r for r in records if r['status'] == 'rejected']),
        'success_fraction': (float(len(certified)) / len(kept)
                             if kept else None),
        'search_depths': [r['depth'] for r in certified],
        'failures': [r for r in kept if r['status'] == 'failed'],
        }


class Lab(object):
    """
    Runs experiments on a thread pool and delivers LabResult or
    LabErrorResponse objects to callbacks on the IOLoop.
    """

    def __init__(self, config=None, io_loop=None, executor=None):
        if config is None:
            config = ExperimentConfig()
        self.config = config
        if io_loop is None:
            self.io_loop = tornado.ioloop.IOLoop.current()
        else:
            self.io_loop = io_loop
        if executor is None:
            executor = ThreadPoolExecutor(max_workers=config.workers)
        self.executor = executor

    def _run(self, func, callback, *args):
        future = self.io_loop.run_in_executor(self.executor, func, *args)

        def _really_callback(future):
            try:
                result = future.result()
            except Exception as e:
                if isinstance(e, (SchottkyLabError, ValueError, IOError)):
                    log.debug('experiment %s failed: %s', func.__name__, e)
                else:
                    log.exception('experiment %s crashed', func.__name__)
                callback(_error_response(e))
                return
            callback(LabResult(result))

        self.io_loop.add_future(future, _really_callback)

    def dimension(self, G, callback, method=None, depth=None):
        if method is None:
            method = self.config.estimator
        if depth is None:
            depth = self.config.depth
        self._run(estimate_dimension, callback, G, method, depth, self.config)

    def limit_set(self, G, callback, depth=None):
        self._run(sample_limit_set, callback, G, depth or self.config.depth
                  or 6)

    def quasicircle(self, G, callback, depth=None):
        if depth is None:
            depth = self.config.depth if self.config.depth is not None else 4

        def _build(G, depth):
            zeta = default_generating_curve(G)
            return zeta, build_quasicircle(G, zeta, depth)

        self._run(_build, callback, G, depth)

    def frechet(self, c1, c2, callback, length_term=None):
        if length_term is None:
            length_term = not self.config.classic

        def _distance(c1, c2):
            return frechet_distance(c1, c2, length_term=length_term)

        self._run(_distance, callback, c1, c2)

    def classical(self, G, callback, budget=None):
        self._run(search_classical_generators, callback, G,
                  budget or self.config.budget)

    def singularity(self, seq, callback):
        self._run(classify_domain_sequence, callback, seq)

    def deform(self, G, callback, steps=None, budget=None):
        method, config = self.config.estimator, self.config

        def _estimator(G):
            return estimate_dimension(G, method, config=config)

        self._run(deform_toward_classical, callback, G,
                  steps or self.config.steps, budget or self.config.budget,
                  _estimator)

    def theorem_check(self, callback, samples=None, threshold=None,
                      budget=None, seed=None):
        samples = self.config.samples if samples is None else samples
        threshold = self.config.threshold if threshold is None else threshold
        budget = budget or self.config.budget
        seed = self.config.seed if seed is None else seed
        records = [None] * samples
        pending = [samples]

        def _sample_done(index):
            def _really_callback(result):
                if result.error:
                    records[index] = {'index': index, 'status': 'rejected',
                                      'reason': result.msg}
                else:
                    records[index] = result.content
                pending[0] -= 1
                if pending[0] == 0:
                    callback(LabResult(_theorem_report(
                        records, samples, threshold, budget, seed)))
            return _really_callback

        if samples == 0:
            callback(LabResult(_theorem_report([], 0, threshold, budget,
                                               seed)))
            return
        for index in range(samples):
            self._run(theorem_sample, _sample_done(index), seed, index,
                      threshold, budget)

    def close(self):
        self.executor.shutdown(wait=True)
