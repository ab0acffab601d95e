"""Fixtures shared across the suite; values live in helpers."""

import pytest

import helpers


def pytest_terminal_summary(terminalreporter):
    """Echo one verdict line per executed acceptance criterion."""
    import sys

    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None) if module else None
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, description in sorted(verdicts):
        terminalreporter.write_line(
            f"criterion {number:>2}: {verdict}  {description}"
        )


@pytest.fixture
def a356():
    return helpers.make_a356()


@pytest.fixture
def a2():
    return helpers.make_a2()


@pytest.fixture
def b3():
    return helpers.make_b(3)


@pytest.fixture
def uniform3():
    return helpers.make_uniform()


@pytest.fixture
def infinite4():
    return helpers.make_infinite(4)
