from __future__ import annotations

import random
from fractions import Fraction

import pytest

from gamma72 import catalog
from gamma72.lattice import IntegerLattice


@pytest.fixture(scope="session")
def e8():
    return catalog.build_e8()


@pytest.fixture(scope="session")
def leech():
    return catalog.build_leech()


@pytest.fixture(scope="session")
def leech_sp():
    return catalog.load_leech_structure()


@pytest.fixture(scope="session")
def leech_pol(leech_sp):
    from gamma72.polarization import polarization_from_structure
    return polarization_from_structure(leech_sp.lattice("Leech"), leech_sp)


@pytest.fixture(scope="session")
def census_data(leech_pol):
    from gamma72.census import CensusData
    return CensusData(leech_pol)


@pytest.fixture(scope="session")
def table(leech_pol):
    from gamma72.census import class_table
    return class_table(leech_pol)


@pytest.fixture(scope="session")
def gamma_build():
    return catalog.build_gamma(full=True)


@pytest.fixture(scope="session")
def bundle(gamma_build):
    from gamma72.decomposition import split
    return split(gamma_build.tensor)


def random_gram(rng: random.Random, n: int, entry: int = 20) -> IntegerLattice:
    """Random positive definite integral Gram with |entries| <= entry."""
    while True:
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = rng.randint(entry // 2, entry)
            for j in range(i):
                g[i][j] = g[j][i] = rng.randint(-entry // 4, entry // 4)
        try:
            return IntegerLattice(g)
        except ValueError:
            continue


def random_shift(rng: random.Random, n: int) -> list[Fraction]:
    den = rng.choice((2, 3, 4))
    return [Fraction(rng.randrange(den), den) for _ in range(n)]


# -- acceptance summary ---------------------------------------------------------

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""
    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        print(line)
        assert passed, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
