"""Session-scoped family constructions shared across test modules.

Building K_6 or the two-path S_n tables is the expensive part of the
suite, so each family is constructed exactly once per run.
"""

import pytest

from confcoalg import families
from confcoalg.poly import Scalar


@pytest.fixture(scope="session")
def vir():
    return families.make_vir()


@pytest.fixture(scope="session")
def cur_sl2():
    return families.make_cur_sl2()


@pytest.fixture(scope="session")
def W():
    return {n: families.make_W(n) for n in range(4)}


@pytest.fixture(scope="session")
def K():
    return {n: families.make_K(n) for n in range(7)}


@pytest.fixture(scope="session")
def S():
    return {n: families.make_S(n) for n in (2, 3)}


@pytest.fixture(scope="session")
def S2b():
    return {
        "0": families.make_S_b(2, Scalar(0)),
        "1": families.make_S_b(2, Scalar(1)),
        "beta": families.make_S_b(2, Scalar(0, 1)),
    }


@pytest.fixture(scope="session")
def Stilde2():
    return families.make_S_tilde(2)


@pytest.fixture(scope="session")
def K4p():
    return families.make_K4prime()


@pytest.fixture(scope="session")
def CK6():
    return families.make_CK6()


@pytest.fixture(scope="session")
def Jn():
    return {n: families.make_Jn(n) for n in (0, 1, 2, 3)}


@pytest.fixture(scope="session")
def JS1():
    return families.make_JS1()


@pytest.fixture(scope="session")
def JCK4():
    return families.make_JCK4()
