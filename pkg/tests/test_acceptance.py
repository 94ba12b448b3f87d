"""Every acceptance criterion as one test; prints a PASS/FAIL line each."""

import pytest

from herglotz_lab import acceptance


@pytest.mark.parametrize("name", list(acceptance.CHECKS))
def test_criterion(name, capsys):
    (result,) = acceptance.run(name)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, "; ".join(result.detail[:10])
