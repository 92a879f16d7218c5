# Copyright 2026 The mtopos Authors
# SPDX-License-Identifier: Apache-2.0
"""Truth values in monoid and string toposes."""

import json

from ._mtopos import (
    ClassicalSystem,
    LeftIdeal,
    Monoid,
    MSet,
    MtoposError,
    ProjectorStrings,
    QuantumSystem,
    selftest,
)
from ._mtopos import execute as _execute

__all__ = [
    "ClassicalSystem",
    "LeftIdeal",
    "Monoid",
    "MSet",
    "MtoposError",
    "ProjectorStrings",
    "QuantumSystem",
    "run",
    "selftest",
]


def run(command, *, spec=None, spec_file=None, eps=None, null_threshold=None,
        depth=4, seed=1, **args):
    """Run a CLI command in-process and return (exit_code, report dict).

    Keyword arguments become command options: ``op="A"`` is ``--op A``.
    ``spec`` is DSL text, ``spec_file`` a path.
    """
    opts = {k: str(v) for k, v in args.items()}
    code, text = _execute(command, opts, spec, spec_file, eps, null_threshold, depth, seed)
    return code, json.loads(text)
