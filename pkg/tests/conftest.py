import functools

import numpy as np
import pytest

from ratadjoint.builtins import BUILTIN_NAMES, builtin, pole_cancel_example
from ratadjoint.regularity import atlas_for, classify

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d} {name}: {detail}")


@pytest.fixture
def accept():
    """Record one criterion result and assert it."""

    def record(num, name, ok, detail=""):
        ACCEPTANCE[num] = (name, bool(ok), detail)
        assert ok, f"criterion {num} ({name}) failed: {detail}"

    return record


ALL_MAPS = BUILTIN_NAMES + ("pole-cancel",)


@functools.lru_cache(maxsize=None)
def cached_map(name):
    return pole_cancel_example() if name == "pole-cancel" else builtin(name)


@functools.lru_cache(maxsize=None)
def cached_report(name):
    return classify(cached_map(name))


@functools.lru_cache(maxsize=None)
def cached_atlas(name):
    return atlas_for(cached_map(name), cached_report(name))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
