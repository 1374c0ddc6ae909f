import random

import pytest

from cvfloer import fixtures
from cvfloer.random_fields import planted_cycle_field, random_complex


@pytest.fixture(scope="session")
def field():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = fixtures.load(name)
        return cache[name]

    return get


def random_fields(seed: int, n: int, planted: bool = True):
    """Deterministic stream of (complex, field) pairs for property loops."""
    rng = random.Random(seed)
    for _ in range(n):
        cx = random_complex(rng)
        yield cx, planted_cycle_field(rng, cx)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
