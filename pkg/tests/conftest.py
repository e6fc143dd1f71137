import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from l0mod import RegularModule, SampleSpace, SamplingPlan  # noqa: E402


@pytest.fixture
def space3():
    return SampleSpace((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))


@pytest.fixture
def two_atoms():
    return SampleSpace.uniform(2)


@pytest.fixture
def V22(two_atoms):
    return RegularModule.free(two_atoms, 2)


@pytest.fixture
def small_plan():
    return SamplingPlan(pairs=12, line_pairs=6, random_lambdas=16, cert_lambdas=8, cert_pairs=3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
