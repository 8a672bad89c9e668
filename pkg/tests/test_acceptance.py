"""Acceptance criteria at their stated sizes and budgets.

Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are also repeated in
an "acceptance criteria" section of the terminal summary.
"""

import pytest
from conftest import ACCEPTANCE_LINES

from tbf.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__.removeprefix("criterion_") for c in CRITERIA])
def test_criterion(criterion):
    res = criterion("full")
    print(res.line())
    ACCEPTANCE_LINES.append(res.line())
    assert res.passed, res.to_json()
