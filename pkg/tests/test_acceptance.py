"""The ten acceptance criteria, one line of output per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines; the
summary is also printed at the end of the module run.
"""

import pytest

from torellicore import acceptance as ac

LINES = []


@pytest.fixture(scope="module", autouse=True)
def summary():
    yield
    print("\nacceptance summary")
    for line in LINES:
        print(line)


@pytest.mark.parametrize("name", ac.ORDER)
def test_criterion(name, capsys):
    res = ac.run_suite(name)
    line = f"{ac.ORDER.index(name) + 1:2d}. {res.summary_line()}"
    LINES.append(line)
    with capsys.disabled():
        print(f"\n{line}")
    assert res.ok, res.to_text(verbose=True)
    assert res.within_budget, line


def test_seeded_runs_are_deterministic():
    a = ac.run_suite("generator-tables", seed=11).to_json()
    b = ac.run_suite("generator-tables", seed=11).to_json()
    assert a == b
