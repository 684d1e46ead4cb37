"""Python bindings for the lq analyses.

Terms are passed as text in the same surface syntax the command-line tool
reads, e.g. ``"(\\x:o. b x x) (a e)"``. Trees use the prefix form
``b(a(e),e)``. Structured results come back as plain dicts.
"""

import json

from ._lq import (
    CapacityError,
    ParseError,
    PreconditionError,
    SortError,
    UniquenessViolation,
    build_An,
    count_a,
    det_value_and_flag,
    embed_depth,
    max_branch_a,
    max_nd_value,
    normal_tree,
    normalize,
    parse,
)
from . import _lq

__all__ = [
    "CapacityError",
    "ParseError",
    "PreconditionError",
    "SortError",
    "UniquenessViolation",
    "analyze",
    "build_An",
    "count_a",
    "det_value_and_flag",
    "embed_depth",
    "family",
    "max_branch_a",
    "max_nd_value",
    "normal_tree",
    "normalize",
    "parse",
    "selftest",
]


def analyze(text, mode="det", m=None, derivation=False, weakening="unproductive", caps=""):
    """Run the det or nondet analysis; returns the JSON report as a dict."""
    return json.loads(_lq.analyze_json(text, mode, m, derivation, weakening, caps))


def family(name, max, mode="det", caps=""):
    """Tabulate instances 1..max of a named family with its verdict."""
    return json.loads(_lq.family_json(name, max, mode, caps))


def selftest(seed=1, count=50, caps=""):
    """Generate a random corpus and check every property on it."""
    return json.loads(_lq.selftest_json(seed, count, caps))
