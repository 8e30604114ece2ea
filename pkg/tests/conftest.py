import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from moprh.pipeline import build, pearson

settings.register_profile("default", max_examples=30, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

A_NIL = np.array([[0, 1], [0, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def gauss_spec():
    return pearson([0, -1], [0, -1])


def mh2_spec():
    return pearson([A_NIL, -I2], [A_NIL.T, -I2])


def nonsym_spec():
    # h^R is not the transpose of h^L, so left and right data differ
    return pearson([A_NIL, -I2], [np.array([[0.3, 0], [0.5, 0]]), -I2])


def diag_hermite_spec():
    # exp(-z^2) and exp(-2 z^2 + 0.6 z) on the diagonal
    return pearson([np.diag([0, 0.3]), np.diag([-1.0, -2.0])], [np.diag([0, 0.3]), np.diag([-1.0, -2.0])])


def altdpi_diag_spec():
    return pearson([np.diag([0.3, -0.5]), np.zeros((2, 2)), np.eye(2)])


def freud_spec(t=0.5):
    return pearson([0, -2 * t, 0, -1.0])


def altdpi_spec(t=0.3, mu=0.0, nu=1.0):
    return pearson([t, mu, nu])


@pytest.fixture(scope="session")
def gauss():
    return build(gauss_spec(), 12, T=9.0)


@pytest.fixture(scope="session")
def gauss_plain():
    return build(gauss_spec(), 6, T=9.0, normalization="plain")


@pytest.fixture(scope="session")
def gauss_frames(gauss):
    return gauss.frames()


@pytest.fixture(scope="session")
def mh2():
    return build(mh2_spec(), 10, T=9.0)


@pytest.fixture(scope="session")
def mh2_frames(mh2):
    return mh2.frames()


@pytest.fixture(scope="session")
def nonsym():
    return build(nonsym_spec(), 9, T=9.0)


@pytest.fixture(scope="session")
def diag_hermite():
    return build(diag_hermite_spec(), 10)


@pytest.fixture(scope="session")
def freud():
    return build(freud_spec(0.5), 12)


@pytest.fixture(scope="session")
def freud0():
    return build(freud_spec(0.0), 12)


@pytest.fixture(scope="session")
def freud_frames(freud):
    return freud.frames()


@pytest.fixture(scope="session")
def altdpi():
    return build(altdpi_spec(), 10, kind="hyperbola", precision="extended")


@pytest.fixture(scope="session")
def altdpi_frames(altdpi):
    return altdpi.frames()


@pytest.fixture(scope="session")
def altdpi_diag():
    return build(altdpi_diag_spec(), 10, kind="hyperbola", precision="extended")
