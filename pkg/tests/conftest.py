from pathlib import Path

import pytest

from dlnom.dlcore import parse_ontology
from dlnom.semantics import Interpretation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return parse_ontology((FIXTURES / f"{name}.dl").read_text())


@pytest.fixture
def o1():
    return load("o1")


@pytest.fixture
def o2():
    return load("o2")


@pytest.fixture
def spy():
    return load("spy")


@pytest.fixture
def beth():
    return load("beth")


@pytest.fixture
def small_model():
    # two elements, a at c, every edge except the d-loop
    return Interpretation(("c", "d"), {"A": {"c", "d"}},
                          {"r": {("c", "c"), ("c", "d"), ("d", "c")}}, {"a": "c"})


CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, label, note = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}: {label}"
                                    + (f" ({note})" if note else ""))
