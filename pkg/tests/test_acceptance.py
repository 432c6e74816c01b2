"""Acceptance gate: one test per criterion.

Each criterion yields one PASS/FAIL line; the lines are printed live with
``-s`` and always in the "acceptance criteria" section of the terminal summary.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from qgspec.acceptance import CRITERIA

SEED = 0


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"c{i + 1:02d}_{c.__name__[10:]}"
                                                     for i, c in enumerate(CRITERIA)])
def test_criterion(criterion):
    r = criterion(SEED)
    line = r.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert r.passed, f"{line}\nfirst failures: {r.failures[:5]}"
