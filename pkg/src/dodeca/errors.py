"""Shared exception types.

Boundary hits are a legitimate, recoverable outcome of the dynamics (the
maps are undefined on piece and sector boundaries, which have measure
zero), so they get their own exception type carrying context instead of a
bare assertion.
"""

from __future__ import annotations


class GraneError(Exception):
    """The map is undefined at this point (sector or piece boundary hit).

    Attributes:
        index: offending sector/piece index when known.
        point: the point at which the orbit stopped.
        steps_done: number of successful steps before the hit.
    """

    def __init__(self, message, index=None, point=None, steps_done=None):
        super().__init__(message)
        self.index = index
        self.point = point
        self.steps_done = steps_done


class DomainError(ValueError):
    """Input lies outside the operation's domain (e.g. not in the wedge)."""


class InconclusiveError(RuntimeError):
    """An iteration cap was exhausted before the computation resolved."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class SelfReturnError(Exception):
    """A mapped fragment straddles the return domain.

    This cannot happen for a region with the clean self-return property, so
    hitting it means the input region does not qualify.
    """

