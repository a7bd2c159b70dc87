"""Acceptance suite: each criterion runs once and reports a single
PASS/FAIL line with its measured quantities and timing."""

import pytest

from hypflow import acceptance

_IDS = [fn.__name__ for fn in acceptance.ALL_CRITERIA]


@pytest.mark.parametrize("criterion", acceptance.ALL_CRITERIA, ids=_IDS)
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print(result.line(), flush=True)
    assert result.passed, result.line()
