import math

import numpy as np
import pytest

import xmc


def test_cohomology():
    assert xmc.cohomology_factors("C2", "Z2-trivial", 2) == [2]
    assert xmc.cohomology_factors("C4", "Q/Z-trivial", 3) == [4]


def test_h1_and_nerves():
    assert xmc.h1("C2", "C2->1")["classes"] == 2
    assert xmc.h1("C2", "id:C2")["classes"] == 1
    assert xmc.nerve_counts("C2->1", 3) == [1, 1, 2, 8]
    assert xmc.nerve_homology("C2->1", 4, 2) == [[0], [], [2]]


def test_unitary():
    u = np.diag([np.exp(1j), 1, 1])
    assert abs(xmc.dlhs_delta(u) - 1 / (6 * math.pi)) < 1e-10
    value, exact = xmc.el_tau(-np.eye(2, dtype=complex))
    assert abs(value - math.pi) < 1e-12 and not exact
    assert xmc.su_tau_member(np.eye(3, dtype=complex))
    ts = [k / 8 for k in range(9)]
    mats = [np.diag([np.exp(2j * math.pi * t), 1]) for t in ts]
    d = xmc.decompose_path(ts, mats)
    assert abs(d["h"][-1] - 0.5) < 1e-12
    assert d["reconstruction"] < 1e-9


def test_bundles_and_errors():
    status, report = xmc.run_bundle({"task": "validate", "xmod": "S3->1"})
    assert status == "violation"
    assert "Peiffer" in report["result"]["issues"][0]["what"]
    status, report = xmc.run_bundle("{oops")
    assert status == "input-error"
    with pytest.raises(ValueError):
        xmc.cohomology_factors("C2", "nonsense", 2)
