import pytest

from lsmword.words import prefix

# letters of u^(2), expanded by hand: phi^3(L) has 16 letters
U2_16 = "LLSLLSMLLSLLSMLS"


def naive_vectors(word, n):
    """Parikh vectors of every length-n window, recounted from scratch."""
    return {(w.count("L"), w.count("S"), w.count("M")) for w in (word[i:i + n] for i in range(len(word) - n + 1))}


@pytest.fixture(scope="session")
def u2():
    return prefix(2, 50_000)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
