from pathlib import Path

import pytest

from perfgrove.model import Model
from perfgrove.records import RunRecord

FIXTURES = Path(__file__).parent / "fixtures"
APPENDIX_PATH = FIXTURES / "appendix_tree.txt"

# one query at replication 3 on 1 GB while the cluster grows from 2 to 16 nodes
SCALING_NODES = (2, 4, 8, 12, 16)
SCALING_TIMES = (27.26, 32.0, 34.18, 39.22, 41.32)


_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    n, title = marker.args
    prev_ok = _CRITERIA.get(n, (title, True))[1]
    _CRITERIA[n] = (title, prev_ok and rep.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture(scope="session")
def appendix_text() -> str:
    return APPENDIX_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def appendix_model(appendix_text) -> Model:
    return Model.from_appendix(appendix_text)


@pytest.fixture
def scaling_records() -> list[RunRecord]:
    return [
        RunRecord(query=1, nodes=n, data_size=1, replication=3, blk_range=64, colocated=1, exec_minutes=t)
        for n, t in zip(SCALING_NODES, SCALING_TIMES)
    ]
