"""Shared fixtures and the acceptance summary printed after the run."""

import numpy as np
import pytest

from pwlcl.sampling import EXAMPLE_PARAMS, MIRRORED_EXAMPLE_PARAMS


@pytest.fixture
def example():
    return EXAMPLE_PARAMS


@pytest.fixture
def mirrored():
    return MIRRORED_EXAMPLE_PARAMS


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call with ``(ok, detail)`` before asserting."""
    name = request.node.name

    def report(ok, detail):
        _ACCEPTANCE.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
