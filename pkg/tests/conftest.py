import pytest

from mipfront import builtin

TP1_FRONT = {(0, 4), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 1), (4, 0), (4, 1)}
TP2_FRONT = {
    (0, 2, 2), (1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 3, 1), (1, 3, 2),
    (2, 0, 2), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 0), (2, 2, 1), (2, 3, 1), (3, 1, 1), (3, 1, 2), (3, 2, 1),
}


def as_int_set(images):
    return {tuple(int(round(z)) for z in img) for img in images}


@pytest.fixture(scope="session")
def tp1():
    return builtin("tp1")


@pytest.fixture(scope="session")
def tp2():
    return builtin("tp2")


@pytest.fixture(scope="session")
def tp3():
    return builtin("tp3")


@pytest.fixture(scope="session")
def rocket():
    return builtin("rocket")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance checks (rocket problem)")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
