import random

import pytest

from kanlim.palgebra import FpModule, ModuleMap, free_module, zero_map, zero_module
from kanlim.complexes import CyclicComplex


P = 3
N = 4


@pytest.fixture
def p():
    return P


@pytest.fixture
def rng():
    return random.Random(20260809)


def moore(p=P):
    Z1 = free_module(p, 1)
    z = zero_module(p)
    mods = [Z1, Z1, z, z]
    diffs = [
        ModuleMap(Z1, Z1, [[p]]),
        zero_map(Z1, z),
        zero_map(z, z),
        zero_map(z, Z1),
    ]
    return CyclicComplex(p, mods, diffs)


@pytest.fixture
def moore_cx():
    return moore()
