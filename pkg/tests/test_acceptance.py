"""One test per acceptance criterion; each prints its pass/fail line."""
import pytest

from whitneyforest.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("name", [c[0] for c in CRITERIA])
def test_criterion(name, capsys):
    r = run_criterion(name)
    with capsys.disabled():
        print("\n" + r.line())
    assert r.passed, r.line()
