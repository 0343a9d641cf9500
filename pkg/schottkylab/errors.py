# Copyright (c) 2026 The schottkylab developers
#
# Licensed under the MIT License. See LICENSE for details.

# Exit codes, stable for scripting
SUCCESS = 0
INPUT_ERROR = 1
NOT_CONVERGED = 2
BUDGET_EXHAUSTED = 3


class SchottkyLabError(Exception):
    """Base class of every error raised by the lab."""
    errno = INPUT_ERROR


# moebius

class PoleError(SchottkyLabError):
    pass


class IdentityError(SchottkyLabError):
    pass


class CIsZeroError(SchottkyLabError):
    pass


# schottky

class NotReducedError(SchottkyLabError):
    pass


class DegenerateImage(SchottkyLabError):
    pass


class NoPairingError(SchottkyLabError):
    pass


class NonLoxodromicError(SchottkyLabError):
    pass


# dimension

class NonConvergedError(SchottkyLabError):
    errno = NOT_CONVERGED


class DegenerateFit(SchottkyLabError):
    pass


# curves

class DisjointnessError(SchottkyLabError):
    pass


class OrderingError(SchottkyLabError):
    pass


# classicality

class DomainViolation(SchottkyLabError):
    """
    A classical domain check failed. ``index`` is the 1-based
    offending circle or generator index (a pair for disjointness).
    """

    def __init__(self, index, msg):
        self.index = index
        super(DomainViolation, self).__init__(msg)


class DisjointnessViolation(DomainViolation):
    pass


class PairingViolation(DomainViolation):
    pass


class OrientationViolation(DomainViolation):
    pass


class InconsistentSequence(SchottkyLabError):
    pass


class BudgetExhausted(SchottkyLabError):
    errno = BUDGET_EXHAUSTED


# input documents

class GroupParseError(SchottkyLabError):
    def __init__(self, msg, field=None, line=None):
        self.field = field
        self.line = line
        if field is not None:
            msg = '%s: %s' % (field, msg)
        if line is not None:
            msg = '%s (line %d)' % (msg, line)
        super(GroupParseError, self).__init__(msg)


errormap = {
    NonConvergedError: NOT_CONVERGED,
    BudgetExhausted: BUDGET_EXHAUSTED,
    SchottkyLabError: INPUT_ERROR,
    ValueError: INPUT_ERROR,
    IOError: INPUT_ERROR,
    ArithmeticError: NOT_CONVERGED,
    }


def errno_for(exc):
    for cls in type(exc).__mro__:
        if cls in errormap:
            return errormap[cls]
    return INPUT_ERROR
