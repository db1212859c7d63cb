import functools

import pytest
from hypothesis import HealthCheck, settings

from liecoh.algebras import build_algebra
from liecoh.multibrackets import extract_structure

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def algebra(label):
    return build_algebra(label)


@functools.lru_cache(maxsize=None)
def structure(label, order):
    return extract_structure(algebra(label), order)


@pytest.fixture(scope="session")
def su2():
    return algebra("A1")


@pytest.fixture(scope="session")
def su3():
    return algebra("A2")


@pytest.fixture(scope="session")
def su4():
    return algebra("A3")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
