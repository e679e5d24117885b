"""Shared pytest options for the suite."""

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--full",
        action="store_true",
        default=False,
        help="also run the large-order (1000+) suites",
    )


@pytest.fixture
def full_mode(request):
    if not request.config.getoption("--full"):
        pytest.skip("large-order suite; enable with --full")
    return True
