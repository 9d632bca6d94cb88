"""Go/no-go suite: every promised check must pass inside its time budget."""

import pytest

from srlab.acceptance import CRITERIA, run_criterion

IDS = [f"{number:02d}-{name}" for number, name, _, _ in CRITERIA]


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=IDS)
def test_acceptance_criterion(number):
    row = run_criterion(number)
    status = "pass" if row["passed"] and row["within_budget"] else "FAIL"
    print(f"[{status}] criterion {row['number']:2d} {row['name']}: "
          f"{row['seconds']:.2f}s of {row['budget_seconds']:.0f}s budget; "
          f"{row['detail']}")
    assert row["passed"], row["detail"]
    assert row["within_budget"], (
        f"criterion {number} took {row['seconds']:.2f}s, "
        f"budget {row['budget_seconds']:.0f}s"
    )
