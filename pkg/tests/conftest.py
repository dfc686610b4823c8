import functools

import pytest

from counterabs.benchmarks import load_fixture
from counterabs.frontend import load_spec_file
from counterabs.pipeline import build_counter_system


@functools.lru_cache(maxsize=None)
def spec_of(path, desugar=True):
    return load_spec_file(path, desugar)


@functools.lru_cache(maxsize=None)
def system_of(path):
    return build_counter_system(spec_of(path))


@pytest.fixture(scope="session")
def ot():
    return load_fixture("ot")


@pytest.fixture(scope="session")
def ot_spec(ot):
    return spec_of(ot.spec_file)


@pytest.fixture(scope="session")
def ot_raw(ot):
    return spec_of(ot.spec_file, False)


@pytest.fixture(scope="session")
def ot_cs(ot):
    return system_of(ot.spec_file)


@pytest.fixture(scope="session")
def ot_buggy_cs():
    return system_of(load_fixture("ot_buggy").spec_file)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
