import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from lvaci.lv_core import LVSystem

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=600, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance lines, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    prev = ACCEPTANCE.get(criterion)
    if prev is not None:
        ok = ok and prev[0]
        detail = f"{prev[1]}; {detail}"
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_rational(rng: random.Random, bound: int = 9, nonzero: bool = True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def random_system(rng: random.Random, bound: int = 9) -> LVSystem:
    return LVSystem(*(random_rational(rng, bound) for _ in range(3)))


@pytest.fixture
def rng():
    return random.Random(20261019)
