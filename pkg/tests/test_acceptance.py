"""End-to-end acceptance checks.

Each criterion returns (ok, detail); the detail string carries measured
numbers against the stated tolerance so a failure is self-explaining.
"""

import pytest

from fcsim.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.name for c in CRITERIA])
def test_acceptance(criterion):
    ok, detail = criterion.fn()
    assert ok, f"{criterion.name}: {detail}"
