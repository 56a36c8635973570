"""Acceptance suite: one test per exit criterion, each at its stated tolerance.

Every criterion prints a ``[PASS]``/``[FAIL]`` line; the collected lines are
repeated in the pytest terminal summary. Run this file directly to print
the table without pytest.
"""

import pytest

from rieszlab.acceptance import CRITERIA, format_report, run_suite

SEED = 42
REPORT_LINES = []


@pytest.fixture(scope="module")
def results():
    return {r.number: r for r in run_suite(seed=SEED)}


@pytest.mark.parametrize("number,key", [(c[0], c[1]) for c in CRITERIA] + [(9, "determinism")],
                         ids=lambda v: str(v))
def test_criterion(results, number, key):
    r = results[number]
    assert r.key == key
    REPORT_LINES.append(r.line())
    print(r.line())
    assert r.passed, r.detail


def test_forced_failure_is_reported():
    forced = run_suite(seed=SEED, tol_override=1e-16, filter_text="groups", determinism=False)
    assert forced and not any(r.passed for r in forced)


if __name__ == "__main__":
    print(format_report(run_suite(seed=SEED)), end="")
