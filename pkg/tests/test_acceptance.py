"""End-to-end acceptance gate: one test per criterion, tolerances pinned."""

import pytest

from thin_gasket import acceptance

NUMBERS = [row[0] for row in acceptance._TABLE]
NAMES = {row[0]: row[1] for row in acceptance._TABLE}


@pytest.mark.parametrize("number", NUMBERS,
                         ids=[f"{n:02d}-{NAMES[n].replace(' ', '-')}"
                              for n in NUMBERS])
def test_criterion(number):
    result = acceptance.criterion(number)
    print(result.line)
    assert result.passed, result.line


def test_run_all_aggregates():
    results = acceptance.run_all(numbers={1, 2}, out=None)
    assert acceptance.all_passed(results)
    payload = acceptance.results_json(results)
    assert payload["passed"] is True
    assert [c["number"] for c in payload["criteria"]] == [1, 2]
    for c in payload["criteria"]:
        assert set(c) == {"number", "name", "passed", "elapsed_s",
                         "budget_s", "detail"}
