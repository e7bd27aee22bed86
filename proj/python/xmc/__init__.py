"""Crossed-module cohomology, obstructions, nerves and unitary checks."""

import json

from ._xmc import (
    InputError,
    NumericError,
    ResourceError,
    ViolationError,
    cohomology_factors,
    decompose_path,
    dlhs_delta,
    el_tau,
    h1,
    nerve_counts,
    nerve_homology,
    su_tau_member,
    version,
)
from ._xmc import run_bundle as _run_bundle


def run_bundle(bundle, seed=None, budget=None):
    """Run a bundle (dict or JSON text); returns (status, report dict)."""
    text = bundle if isinstance(bundle, str) else json.dumps(bundle)
    status, report = _run_bundle(text, seed, budget)
    return status, json.loads(report)


__all__ = [
    "InputError",
    "NumericError",
    "ResourceError",
    "ViolationError",
    "cohomology_factors",
    "decompose_path",
    "dlhs_delta",
    "el_tau",
    "h1",
    "nerve_counts",
    "nerve_homology",
    "run_bundle",
    "su_tau_member",
    "version",
]
