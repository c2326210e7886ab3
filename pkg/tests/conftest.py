import os

import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--heavy", action="store_true", default=False,
                     help="run heavy-tier checks (tens of minutes)")


def heavy_enabled(config) -> bool:
    return config.getoption("--heavy") or os.environ.get("LATTICETHETA_HEAVY", "") not in ("", "0")


def pytest_collection_modifyitems(config, items):
    if heavy_enabled(config):
        return
    skip = pytest.mark.skip(reason="heavy tier; pass --heavy or set LATTICETHETA_HEAVY=1")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
