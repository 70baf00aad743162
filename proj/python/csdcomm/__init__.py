"""Python access to the convex set disjointness protocols."""

import json

from . import _core
from ._core import CapExceeded, disj, halfspace_traces, hulls_intersect, symmetric_caratheodory

__all__ = [
    "CapExceeded",
    "container_family",
    "disj",
    "disj_to_promise_csd",
    "halfspace_traces",
    "hulls_intersect",
    "run_csd",
    "run_learning",
    "run_promise_csd",
    "separate",
    "symmetric_caratheodory",
]


def separate(points, x, y):
    out = _core.separate(points, x, y)
    return None if out is None else json.loads(out)


def container_family(points, eps):
    return json.loads(_core.container_family(points, eps))


def run_promise_csd(points, x, y, eps=None):
    return json.loads(_core.run_promise_csd(points, x, y, eps))


def run_csd(points, x, y, eps=None):
    return json.loads(_core.run_csd(points, x, y, eps))


def run_learning(points, alice, bob, eps=None):
    return json.loads(_core.run_learning(points, alice, bob, eps))


def disj_to_promise_csd(x, y):
    return json.loads(_core.disj_to_promise_csd(x, y))
