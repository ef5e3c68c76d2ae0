import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from queuetion import validate_instance
from queuetion.io import random_instance

I1_ROWS = [("A", 1, 5)]
I2_ROWS = [("A", 1, 3), ("B", 2, 4)]
I3_ROWS = [("A", 1, 3), ("B", 2, 4), ("C", 1, 1)]


@pytest.fixture
def I1():
    return validate_instance(I1_ROWS)


@pytest.fixture
def I2():
    return validate_instance(I2_ROWS)


@pytest.fixture
def I3():
    return validate_instance(I3_ROWS)


small_fraction = st.builds(Fraction, st.integers(1, 12), st.integers(1, 4))


@st.composite
def exact_instances(draw, min_n=1, max_n=5, distinct=False):
    n = draw(st.integers(min_n, max_n))
    rows = [(f"P{i}", draw(small_fraction), draw(small_fraction)) for i in range(n)]
    inst = validate_instance(rows)
    if distinct:
        from hypothesis import assume

        assume(inst.distinct_value_rates())
    return inst


@st.composite
def float_instances(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pos = st.floats(0.05, 20.0, allow_nan=False, allow_infinity=False)
    rows = [(f"P{i}", draw(pos), draw(pos)) for i in range(n)]
    return validate_instance(rows, exact=False)


def random_bids(inst, rng: random.Random):
    """Bids that often sit on or near the values that matter for equilibria."""
    pool = [0 * inst.t[0], *inst.v]
    mode = rng.randrange(4)
    if mode == 0:
        return [rng.choice(pool) for _ in range(inst.n)]
    if mode == 1:
        return [v + Fraction(rng.randint(-2, 2), 4) * v for v in inst.v]
    if mode == 2:
        return [Fraction(rng.randint(0, 40), rng.randint(1, 4)) for _ in range(inst.n)]
    return list(inst.v)


def instance_suite(count, max_n, seed, exact=True, distinct=False, min_n=1):
    rng = random.Random(seed)
    return [
        random_instance(rng.randint(min_n, max_n), rng, exact=exact, distinct=distinct)
        for _ in range(count)
    ]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(mod.RESULTS, key=lambda t: int(t[1:])):
        terminalreporter.write_line(mod.RESULTS[tag])
