"""Case-study acceptance suite.

One test per criterion; each prints its PASS/FAIL line (visible with -s or
on failure) and asserts the criterion holds at the tolerance fixed in
``partorq.verification``.  ``partorq verify --suite paper`` runs the same
criteria from the command line.
"""

import pytest

from partorq import verification


@pytest.mark.parametrize(
    "criterion",
    verification.ALL_CRITERIA,
    ids=[fn.__name__.removeprefix("criterion_") for fn in verification.ALL_CRITERIA],
)
def test_criterion(criterion):
    row = criterion()
    print(row.line())
    assert row.passed, row.line()


def test_suite_is_complete():
    rows = verification.run_paper_suite()
    assert [r.index for r in rows] == list(range(1, 11))
