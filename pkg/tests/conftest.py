import numpy as np
import pytest

from tedk.forest import LabelInterner, parse_paren_text


@pytest.fixture
def interner():
    return LabelInterner()


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(0xC0FFEE)))


def forest(text, it):
    return parse_paren_text(text, it)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERION_LINES
    except ImportError:
        return
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
