"""Runs every numbered acceptance criterion and prints one verdict line each.

The criteria live in qhyp.acceptance so the CLI (verify-all) and this module
share a single implementation.  They are executed once per session and the
results cached; each test then reports and asserts its own criterion, so a
failure pinpoints the exact criterion without stopping the others.

Run with -s (or look at the captured stdout of a failure) to see the
PASS/FAIL lines.
"""

import pytest

from qhyp.acceptance import CRITERIA, run_all

_cache = {}


@pytest.fixture(scope="session")
def results():
    if "all" not in _cache:
        _cache["all"] = {r.number: r for r in run_all()}
    return _cache["all"]


@pytest.mark.parametrize(
    "number,name",
    [(num, name) for num, name, _ in CRITERIA],
    ids=[f"{num:02d}-{name}" for num, name, _ in CRITERIA],
)
def test_criterion(results, number, name):
    r = results[number]
    mark = "PASS" if r.ok else "FAIL"
    print(f"{mark}  criterion {r.number:02d} ({r.name}): {r.detail}")
    assert r.ok, f"criterion {number:02d} ({name}): {r.detail}"


def test_all_criteria_covered(results):
    assert sorted(results) == list(range(1, 13))
