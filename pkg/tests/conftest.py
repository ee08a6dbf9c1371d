import functools
import os
import sys
import tempfile

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# one throwaway ball cache per test session, shared by every Session built in it
os.environ.setdefault("RIPSBOUND_CACHE_DIR", tempfile.mkdtemp(prefix="ripsbound-cache-"))

from ripsbound.group import build_ball, preset  # noqa: E402


@functools.lru_cache(maxsize=None)
def cached_ball(name: str, radius: int):
    return build_ball(preset(name), radius)


@pytest.fixture
def ball():
    return cached_ball


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@functools.lru_cache(maxsize=None)
def rewriting_group(name: str, max_len: int):
    """Independent word-problem oracle for a preset (built once per session)."""
    from oracles import RewritingGroup

    p = preset(name)
    return RewritingGroup(p.rank, p.inverse, p.relators, max_len)
