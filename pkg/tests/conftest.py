import sys
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import strategies as st

from monobounds.model import DEFIERS, RESPONSE_TYPES, DataDistribution, MassFunction

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def dist(z0, z1):
    """Cells in the order P00|z, P10|z, P01|z, P11|z (y varies fastest)."""
    return DataDistribution(tuple(F(v) for v in (*z0, *z1)))


P_STAR = dist(("1/2", "1/5", "1/10", "1/5"), ("3/10", "1/10", "1/5", "2/5"))
P_PC = dist(("1/2", "1/2", 0, 0), (0, 0, "1/2", "1/2"))
P_DIAMOND = dist(("2/5", "3/10", "1/10", "1/5"), ("1/5", "1/10", "3/10", "2/5"))
P_BAD = dist(("3/5", 0, 0, "2/5"), (0, "3/5", "2/5", 0))
P_DEFIER = dist((0, 0, 0, 1), (1, 0, 0, 0))


@pytest.fixture
def p_star():
    return P_STAR


@pytest.fixture
def p_pc():
    return P_PC


@pytest.fixture
def p_diamond():
    return P_DIAMOND


@pytest.fixture
def p_bad():
    return P_BAD


@pytest.fixture
def data_dir():
    return DATA_DIR


@st.composite
def mass_functions(draw, em=False, max_weight=6):
    """Random exact mass functions; ``em`` zeroes the defier types."""
    weights = [
        0 if (em and w in DEFIERS) else draw(st.integers(0, max_weight)) for w in RESPONSE_TYPES
    ]
    if sum(weights) == 0:
        k = draw(st.sampled_from([w.index for w in RESPONSE_TYPES if not (em and w in DEFIERS)]))
        weights[k] = 1
    total = sum(weights)
    return MassFunction(tuple(F(v, total) for v in weights))


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=30)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        name, ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name}  ({detail})")
