import sys
from fractions import Fraction

import pytest


def cf_value(head, digits):
    """Plain Fraction evaluation of [head; digits], used as an independent oracle."""
    x = Fraction(0)
    for a in reversed(digits):
        x = 1 / (a + x)
    return head + x


def truncated_height(digit, k, depth):
    """Oracle for f(sigma^k x): truncate both one-sided expansions at ``depth`` digits."""
    right = cf_value(digit(k), [digit(k + i) for i in range(1, depth)])
    left = cf_value(0, [digit(k - i) for i in range(1, depth)])
    return right + left


@pytest.fixture
def oracle_height():
    return truncated_height


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
