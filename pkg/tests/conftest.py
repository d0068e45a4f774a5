import random

import pytest

from isocomm import Neighborhood, TorusShape


def random_neighborhood(rng, max_d=4, max_s=40, lo=-4, hi=4):
    d = rng.randint(1, max_d)
    s = rng.randint(1, max_s)
    offsets = [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(s)]
    return Neighborhood.of(offsets)


def random_shape(rng, d, lo=2, hi=5):
    return TorusShape(tuple(rng.randint(lo, hi) for _ in range(d)))


def random_suite(count, seed, **kw):
    """Deterministic (neighborhood, shape) pairs; every fourth shape is all 2s."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = random_neighborhood(rng, **kw)
        shape = TorusShape((2,) * n.d) if k % 4 == 0 else random_shape(rng, n.d)
        out.append((n, shape))
    return out


@pytest.fixture(scope="session")
def suite200():
    return random_suite(200, seed=20160408)


@pytest.fixture(scope="session")
def suite100():
    return random_suite(100, seed=7)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome, props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, outcome, detail in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'} criterion {crit}: {detail}")
