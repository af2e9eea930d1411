"""End-to-end acceptance criteria; each prints one PASS/FAIL line."""
import pytest

from toric_periods.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, result.detail
