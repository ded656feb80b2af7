import itertools

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def has_repeat(s) -> bool:
    """Independent check: any window vv with 1 <= |v| <= 3."""
    n = len(s)
    for k in (1, 2, 3):
        for i in range(n - 2 * k + 1):
            if s[i:i + k] == s[i + k:i + 2 * k]:
                return True
    return False


def all_roots(s: bytes) -> set:
    """Every irreducible string reachable by deduplication in any order."""
    seen, stack, out = {s}, [s], set()
    while stack:
        t = stack.pop()
        moved = False
        n = len(t)
        for k in (1, 2, 3):
            for i in range(n - 2 * k + 1):
                if t[i:i + k] == t[i + k:i + 2 * k]:
                    moved = True
                    u = t[:i + k] + t[i + 2 * k:]
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
        if not moved:
            out.add(t)
    return out


def irreducible_strings(q: int, n: int) -> list:
    return [bytes(v) for v in itertools.product(range(q), repeat=n) if not has_repeat(bytes(v))]


@pytest.fixture(scope="session")
def engine4():
    from tandemcode.confusable import engine_for
    return engine_for(4)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
