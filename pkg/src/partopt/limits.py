"""Wall-clock and memory guard helpers.

Deadlines are absolute ``time.monotonic()`` values so they can be shared
with worker processes on the same machine. The memory guard is best effort:
it samples the resident set size of the calling process and compares it to a
configurable ceiling, it does not enforce anything at the OS level.
"""

from __future__ import annotations

import time

import psutil

_PROCESS = psutil.Process()


def deadline_after(timeout: float | None) -> float | None:
    """Absolute monotonic deadline ``timeout`` seconds from now."""
    if timeout is None:
        return None
    return time.monotonic() + timeout


def deadline_passed(deadline: float | None) -> bool:
    return deadline is not None and time.monotonic() > deadline


def rss_bytes() -> int:
    return _PROCESS.memory_info().rss


def memory_exceeded(limit_bytes: int | None) -> bool:
    return limit_bytes is not None and rss_bytes() > limit_bytes
