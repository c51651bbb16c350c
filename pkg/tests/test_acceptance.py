"""Acceptance criteria: one PASS/FAIL line per criterion, all checks exact.

Run ``pytest tests/test_acceptance.py -s`` (or ``vecrel check all``) to see
the report.
"""
import pytest

from vecrel.checks import SUITES


@pytest.mark.parametrize("number,suite", SUITES, ids=[fn.__name__ for _, fn in SUITES])
def test_criterion(number, suite, capsys):
    outcome = suite(seed=0)
    verdict = "PASS" if outcome.passed else "FAIL"
    limit = "" if outcome.limit is None else f", limit {outcome.limit:.0f}s"
    with capsys.disabled():
        print(f"\ncriterion {number:2d}: {outcome.name} {verdict} "
              f"({outcome.instances} instances, {outcome.seconds:.2f}s{limit})")
    assert outcome.passed, outcome.failures[:5]
