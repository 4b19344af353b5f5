"""The twelve acceptance criteria, one test each, at their stated tolerances."""
import pytest

from spectralset import acceptance

ROWS = []


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, tmp_path):
    kw = {"findings_path": str(tmp_path / "findings.jsonl")} if number == 11 else {}
    row = acceptance.run_one(number, grid=512, seed=0, **kw)
    line = acceptance.format_row(row)
    ROWS.append(line)
    print(line)
    assert row.passed, line
