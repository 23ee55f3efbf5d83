"""The eight acceptance criteria, one test each.

Each criterion yields one PASS, FAIL or SKIPPED line; the lines are printed in
the terminal summary of every pytest run that includes this file, and by
``python3 tests/test_acceptance.py``. Criterion 7 needs Seifert matrices for the
table knots: point TABLE1_KNOTS at a knot file to run it.
"""

import pytest

from zslice import acceptance

RESULTS = []  # CheckResult lines, read by the terminal summary hook in conftest.py


@pytest.mark.parametrize("number", [n for n, *_ in acceptance.CRITERIA])
def test_criterion(number):
    res = acceptance.run_criterion(number)
    RESULTS.append(res.line())
    if res.status == "SKIPPED":
        pytest.skip(res.line())
    assert res.status == "PASS", res.line()


def test_table1_checker_on_synthetic_records():
    """The table checker itself, on knots whose row we can predict."""
    from zslice import knotio

    granny = knotio.KnotRecord.make("9_37", knotio.GRANNY.v)  # Cor 5.3(iv) fires
    assert acceptance.check_table1_record(granny, "iv") is None
    assert acceptance.check_table1_record(granny, "iii") is not None
    three = knotio.connected_sum(knotio.GRANNY, knotio.TREFOIL, "12a554")
    assert acceptance.check_table1_record(three, "gens") is None
    assert acceptance.table1_rows()[acceptance.table1_key("11a_155")] == "iii"


if __name__ == "__main__":
    for result in acceptance.run_all():
        print(result.line(), flush=True)
