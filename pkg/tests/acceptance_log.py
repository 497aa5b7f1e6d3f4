"""Shared record of acceptance criterion outcomes, printed at the end of a run."""
import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Run a criterion body, enforce its time limit and record one PASS/FAIL line."""
    start = time.perf_counter()
    status, detail = "PASS", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= limit:
            status, detail = "FAIL", f" (over the {limit:g} s limit)"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        status, detail = "FAIL", f" ({type(exc).__name__}: {exc})".replace("\n", " ")[:200]
        raise
    finally:
        line = f"{status} criterion {number}: {title} [{elapsed:.2f} s]{detail}"
        LINES.append(line)
        print(line)
    assert elapsed < limit, f"criterion {number} took {elapsed:.2f} s, limit {limit:g} s"
