import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rastergraph import corpus  # noqa: E402
from rastergraph.raster import Raster, Scale  # noqa: E402

NODATA = -9999.0

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (passed, detail)


@pytest.fixture
def raster_a() -> Raster:
    """2x2 grid at the origin with unit cells, bottom row [1, 2], top row [3, 4]."""
    return Raster.from_rows((0.0, 0.0), 1.0, 2, 2, [1, 2, 3, 4])


@pytest.fixture
def raster_sparse() -> Raster:
    return Raster.from_rows((0.0, 0.0), 1.0, 2, 2, [1, NODATA, 3, NODATA], Scale())


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    return corpus.generate(tmp_path_factory.mktemp("corpus"))


@pytest.fixture(scope="session")
def corpus_ws(corpus_dir):
    return corpus.load(corpus_dir)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in ACCEPTANCE.items():
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
