"""Session-wide polynomial builds.

Construction is deterministic, so every suite shares one copy; the larger
builds (ell=23, 31) only run when a test actually requests them.
"""

import pytest

from ccrpoly.builder import build, build_classical_phi


@pytest.fixture(scope="session")
def u5():
    return build("U", 5)


@pytest.fixture(scope="session")
def u7():
    return build("U", 7)


@pytest.fixture(scope="session")
def u11():
    return build("U", 11)


@pytest.fixture(scope="session")
def u13():
    return build("U", 13)


@pytest.fixture(scope="session")
def u31():
    return build("U", 31)


@pytest.fixture(scope="session")
def v5():
    return build("V", 5)


@pytest.fixture(scope="session")
def v7():
    return build("V", 7)


@pytest.fixture(scope="session")
def v11():
    return build("V", 11)


@pytest.fixture(scope="session")
def v13():
    return build("V", 13)


@pytest.fixture(scope="session")
def w5():
    return build("W", 5)


@pytest.fixture(scope="session")
def w7():
    return build("W", 7)


@pytest.fixture(scope="session")
def w11():
    return build("W", 11)


@pytest.fixture(scope="session")
def w13():
    return build("W", 13)


@pytest.fixture(scope="session")
def ua11():
    return build("Ua", 11)


@pytest.fixture(scope="session")
def ua23():
    return build("Ua", 23)


@pytest.fixture(scope="session")
def phi2():
    return build_classical_phi(2)


@pytest.fixture(scope="session")
def phi3():
    return build_classical_phi(3)


@pytest.fixture(scope="session")
def phi5():
    return build_classical_phi(5)


@pytest.fixture(scope="session")
def phi7():
    return build_classical_phi(7)


@pytest.fixture(scope="session")
def phi11():
    return build_classical_phi(11)


@pytest.fixture(scope="session")
def phi13():
    return build_classical_phi(13)
