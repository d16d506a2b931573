import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from symdyn.patterns import Alphabet, Pattern  # noqa: E402
from symdyn.sft import Sft  # noqa: E402

BIN = Alphabet.of_size(2)


@pytest.fixture
def golden():
    return Sft.from_words(2, [[1, 1]])


@pytest.fixture
def full():
    return Sft(1, BIN)


@pytest.fixture
def hard_square():
    return Sft(2, BIN, (Pattern.make({(0, 0): 1, (1, 0): 1}), Pattern.make({(0, 0): 1, (0, 1): 1})))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(LINES.items()):
            terminalreporter.write_line(line)
