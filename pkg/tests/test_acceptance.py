"""Acceptance battery: one test per verification criterion.

Each criterion prints a single pass/fail line; the heavy shared artifacts
(partitions, return systems, the witness) are built once per session and
reused across the whole suite.
"""

import pytest

from dodeca.checks import CHECK_NAMES, run_checks


@pytest.mark.parametrize("name", CHECK_NAMES)
def test_criterion(ctx, name):
    res = run_checks([name], ctx)[0]
    status = "PASS" if res.ok else "FAIL"
    print(f"[acceptance] {res.name:<26} {status}  ({res.seconds:.2f}s)")
    assert res.ok, f"{name}: {res.error}"
