"""Finite-ring classifier and bounded verification suites.

Reports come back as plain dicts in the same schema the command-line tool
writes (see docs/report_schema.json).
"""

import json

from ._cpbaer import (
    CapExceeded,
    InputError,
    PreconditionError,
    Ring,
    SpecError,
    canonical_spec,
    canonical_suite,
    explain,
    flag_names,
    suite_names,
    version,
)
from . import _cpbaer

__all__ = [
    "CapExceeded",
    "InputError",
    "PreconditionError",
    "Ring",
    "SpecError",
    "canonical_spec",
    "canonical_suite",
    "classify",
    "explain",
    "flag_names",
    "mine",
    "suite_names",
    "verify",
    "version",
]

__version__ = version()


def verify(suite, spec="", **options):
    """Run a suite on a spec and return the report as a dict.

    Options mirror the CLI flags: bound_n, bound_d, window, order_cap,
    brute_limit, seed, cache_dir.
    """
    return json.loads(_cpbaer.run_json(suite, spec, **options))


def classify(spec, **options):
    """Report for the classify suite."""
    return verify("classify", spec, **options)


def mine(family, predicate, max_order=64, **options):
    """Classify every instance of a family and keep those matching the predicate."""
    return json.loads(_cpbaer.mine_json(family, predicate, max_order, **options))


def _ring_classify(self):
    return json.loads(self.classify_json())


Ring.classify = _ring_classify
