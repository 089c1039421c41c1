"""Exit criteria: one printed pass/fail line per criterion.

Run ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import pytest

from phitorsion.acceptance import CHECKS, run_check, warm_up


@pytest.fixture(scope="module", autouse=True)
def compiled_kernels():
    warm_up()


@pytest.mark.acceptance
@pytest.mark.parametrize("number", [n for n, *_ in CHECKS], ids=[f"{n:02d}-{name}" for n, name, *_ in CHECKS])
def test_criterion(number):
    result = run_check(number)
    print("\n" + result.line())
    assert result.passed, result.detail
