import cmath
import math
import re

import numpy as np
import pytest

from painleve_dyn.params import EVEN_SIGNS, BParam, KappaParam

ACCEPTANCE_LINES: dict = {}

PROPER_TAGS = ("A1", "A2", "A1x2", "A3", "A1x3", "D4", "A1x4")

# rows of the family table, constructed directly from their equations
FAMILY_ROWS = (
    ("D4", 1), ("A1x4", 1), ("A1x4", 2), ("A3", 1), ("A3", 2),
    ("A1x3", 1), ("A1x3", 2), ("A1x3", 3), ("A1x3", 4), ("A2", 2),
    ("A1x2", 1), ("A1x2", 2), ("A1x2", 3), ("A1x2", 4),
    ("A1", 1), ("A1", 2), ("A1", 3), ("A1", 4),
)


def rand_unit(rng):
    """A generic nonzero complex number away from the unit circle's special points."""
    r = math.exp(rng.uniform(-0.5, 0.5))
    return r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))


def family_sample(tag, m, rng) -> BParam:
    """Random point of the family B_m(tag), built from its defining equations."""
    e = EVEN_SIGNS[rng.integers(len(EVEN_SIGNS))]
    u = [rand_unit(rng) for _ in range(4)]
    E1, E2, E3, E4 = e
    if (tag, m) == ("D4", 1):
        b = [E1, E2, E3, E4]
    elif (tag, m) == ("A1x4", 1):
        b = [E1, E2, E3, -E4]
    elif (tag, m) == ("A1x4", 2):
        b = [1j * E1, 1j * E2, 1j * E3, 1j * E4]
    elif (tag, m) == ("A3", 1):
        b = [E1, E2, u[0] / E3, u[0] / E4]
    elif (tag, m) == ("A3", 2):
        b = [E1, E2, u[0] / E3, 1 / (u[0] * E4)]
    elif (tag, m) == ("A1x3", 1):
        b = [u[0], E2, E3, E4]
    elif (tag, m) == ("A1x3", 2):
        v = u[0]
        b = [v / E1, 1 / (v * E2), 1 / (v * E3), 1 / (v * E4)]
    elif (tag, m) == ("A1x3", 3):
        v = u[0]
        b = [v / E1, v / E2, v / E3, v / E4]
    elif (tag, m) == ("A1x3", 4):
        v = u[0]
        b = [v / E1, 1 / (v * E2), 1 / (v * E3), v / E4]
    elif (tag, m) == ("A2", 2):
        b2, b3 = u[0], u[1]
        b = [E1, b2, b3, 1 / (E1 * b2 * b3)]
    elif (tag, m) == ("A1x2", 1):
        b = [E1, E2, u[0], u[1]]
    elif (tag, m) == ("A1x2", 2):
        s = (1, -1)[rng.integers(2)]
        b = [s * u[0], u[0], u[1], s / u[1]]
    elif (tag, m) == ("A1x2", 3):
        s = (1, -1)[rng.integers(2)]
        b = [s * u[0], s * u[1], u[1], u[0]]
    elif (tag, m) == ("A1x2", 4):
        s = (1, -1)[rng.integers(2)]
        b = [s / u[0], s / u[1], u[1], u[0]]
    elif (tag, m) == ("A1", 1):
        b = [(1, -1)[rng.integers(2)], u[1], u[2], u[3]]
    elif (tag, m) == ("A1", 2):
        b = [u[1] * u[2] * u[3], u[1], u[2], u[3]]
    elif (tag, m) == ("A1", 3):
        b = [u[0], u[1], u[2], u[1] * u[2] / u[0]]
    elif (tag, m) == ("A1", 4):
        b = [u[0], u[1], u[2], 1 / (u[0] * u[1] * u[2])]
    else:
        raise KeyError((tag, m))
    return BParam.from_b1234(*b)


def generic_kappa(seed: int) -> KappaParam:
    return KappaParam.random(np.random.default_rng(seed))


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture
def acceptance():
    """Shared log of acceptance lines, printed in the terminal summary."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
