import random

import pytest
from hypothesis import HealthCheck, settings

from hypzeta import CurveSpec, CurveError, validate_curve

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def random_curve(rng: random.Random, p: int, g: int, n: int = 1) -> CurveSpec:
    """Random monic squarefree P of degree 2g+1 over F_q."""
    while True:
        coeffs = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(2 * g + 1)] + [1]
        spec = CurveSpec.create(p, coeffs, n=n)
        try:
            validate_curve(spec, 1)
        except CurveError:
            continue
        return spec


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def f7_curve():
    """y^2 = x^3 - x over F_7."""
    return CurveSpec.create(7, [0, -1, 0, 1])


@pytest.fixture
def f5_curve():
    """y^2 = x^3 + x + 1 over F_5."""
    return CurveSpec.create(5, [1, 1, 0, 1])


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion (tests that record a 'criterion')."""
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call":
                continue
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props:
                rows.append((int(props["criterion"]), outcome, props.get("title", ""), props.get("detail", "")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, outcome, title, detail in sorted(rows):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{mark}] {title}: {detail}")
