import itertools
import random

import pytest
from hypothesis import strategies as st

from ctsat import published as ref
from ctsat.couples import CcsSystem, cts_to_ccs
from ctsat.decomposition import CtFormula
from ctsat.formula import TabularFormula


def all_assignments(n):
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]


@st.composite
def formulas(draw, min_n=3, max_n=8, max_m=20):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(0, max_m))
    lines = []
    for _ in range(m):
        cols = draw(st.lists(st.integers(0, n - 1), min_size=3, max_size=3, unique=True))
        bits = draw(st.lists(st.integers(0, 1), min_size=3, max_size=3))
        lines.append(tuple(zip(cols, bits)))
    return TabularFormula(n, tuple(lines))


@st.composite
def ct_formulas(draw, min_n=3, max_n=9):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    tiers = [frozenset(draw(st.sets(st.integers(0, 7), max_size=4))) for _ in range(n - 2)]
    return CtFormula(tuple(perm), tuple(tiers))


def random_ctf(rng: random.Random, n: int, density: float = 0.25) -> CtFormula:
    perm = list(range(n))
    rng.shuffle(perm)
    tiers = [frozenset(t for t in range(8) if rng.random() < density) for _ in range(n - 2)]
    return CtFormula(tuple(perm), tuple(tiers))


def ccs_of(number):
    return CcsSystem(tuple(cts_to_ccs(s) for s in ref.cts_system(number)), 8)


@pytest.fixture
def letters():
    return ref.NAMES
