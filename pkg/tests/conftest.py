import pytest

from germforge.core.utils import set_quiet


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run large computations")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large computations; run with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def quiet_console():
    set_quiet(True)
    yield
