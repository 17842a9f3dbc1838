from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from shiftlab import formats

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def full2():
    return formats.load_shift("catalog:full2.sft")


@pytest.fixture(scope="session")
def golden():
    return formats.load_shift("catalog:golden_mean.sft")


@pytest.fixture(scope="session")
def period2():
    return formats.load_shift("catalog:period2.sft")


@pytest.fixture(scope="session")
def one_block():
    return formats.load_shift("catalog:one_block_of_ones.sofic")


@pytest.fixture(scope="session")
def hard_square():
    return formats.load_shift("catalog:hard_square.sft")


# -- one summary line per acceptance criterion

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::test_criterion_")[1]
    num = int(name.split("_")[0])
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(num, ("PASS", name))[0]
        status = "FAIL" if report.failed or prev == "FAIL" else ("SKIP" if report.skipped else "PASS")
        _CRITERIA[num] = (status, name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        status, name = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {name}")
