# Copyright (c) 2026 The schottkylab developers
#
# Permission is hereby granted, free of charge, to any person
# obtaining a copy of this software and associated documentation
# files (the "Software"), to deal in the Software without
# restriction, including without limitation the rights to use, copy,
# modify, merge, publish, distribute, sublicense, and/or sell copies
# of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be
# included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
# EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
# MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
# NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS
# BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN
# ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN
# CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import errno
import os
import shutil
import sys
import types

import nose.tools
import numpy as np
from tornado.ioloop import IOLoop

import schottkylab
from schottkylab.lab import GroupDocument, dumps

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')

# Seconds before a stuck experiment stops the loop
IOLOOP_TIMEOUT = 120


def with_ioloop(func):
    @nose.tools.make_decorator(func)
    def wrapper(*args, **kwargs):
        ioloop = IOLoop()
        failures = []

        # Let exceptions raised in callbacks fail the test
        def run_callback(self, callback):
            try:
                callback()
            except Exception:
                failures.append(sys.exc_info()[1])
                self.stop()
        ioloop._run_callback = types.MethodType(run_callback, ioloop)
        timeout = ioloop.call_later(IOLOOP_TIMEOUT, ioloop.stop)

        try:
            result = func(ioloop, *args, **kwargs)
        finally:
            ioloop.remove_timeout(timeout)
            ioloop.close()
        if failures:
            raise failures[0]
        return result

    return wrapper


def mkdir(*a, **kw):
    try:
        os.mkdir(*a, **kw)
    except OSError as e:
        if e.errno != errno.EEXIST:
            raise


def maketemp(name):
    tmp = os.path.join(os.path.dirname(__file__), 'tmp')
    mkdir(tmp)

    tmp = os.path.join(tmp, name)
    try:
        shutil.rmtree(tmp)
    except OSError as e:
        if e.errno != errno.ENOENT:
            raise
    os.mkdir(tmp)
    return tmp


def fixture(name):
    return os.path.join(FIXTURES, name)


def write_group(directory, filename, G, **metadata):
    path = os.path.join(directory, filename)
    with open(path, 'w') as f:
        f.write(dumps(GroupDocument(G, metadata)))
    return path


def assert_raises(excClass, callableObj, *args, **kwargs):
    """
    Like unittest.TestCase.assertRaises, but returns the exception.
    """
    try:
        callableObj(*args, **kwargs)
    except excClass as e:
        return e
    if hasattr(excClass, '__name__'):
        excName = excClass.__name__
    else:
        excName = str(excClass)
    raise AssertionError("%s not raised" % excName)


def assert_same_map(f, g, rtol=1e-9):
    """Projective equality of two maps relative to their entry size."""
    x, y = f.as_array(), g.as_array()
    scale = max(np.abs(x).max(), np.abs(y).max())
    diff = min(np.abs(x - y).max(), np.abs(x + y).max())
    assert diff <= rtol * scale, '%r != %r' % (f, g)


def random_map(rng):
    """Random map with entries of moderate size."""
    while True:
        entries = rng.normal(size=4) + 1j * rng.normal(size=4)
        det = entries[0] * entries[3] - entries[1] * entries[2]
        if abs(det) > 0.5:
            return schottkylab.MoebiusMap(*entries)
