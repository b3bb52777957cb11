import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from helpers import synthetic_levels, write_dataset  # noqa: E402


@pytest.fixture(scope="session")
def tables():
    with open(HERE / "fixtures" / "supplementary_tables.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def levels():
    return synthetic_levels()


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    return write_dataset(tmp_path_factory.mktemp("data"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
