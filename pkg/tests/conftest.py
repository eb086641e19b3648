import numpy as np
import pytest

from shl import model, reptheory


@pytest.fixture(scope="session")
def m2():
    return model.standard_model(2)


@pytest.fixture(scope="session")
def m3():
    return model.standard_model(3)


@pytest.fixture(scope="session")
def dt2(m2):
    return model.defining_tensors(m2)


@pytest.fixture(scope="session")
def dt3(m3):
    return model.defining_tensors(m3)


@pytest.fixture(scope="session")
def cal2_hsH(m2):
    return reptheory.get_calibration(m2, "hsH")


@pytest.fixture(scope="session")
def cal2_qsH(m2):
    return reptheory.get_calibration(m2, "qsH")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
