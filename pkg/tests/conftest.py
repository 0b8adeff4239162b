import numpy as np
import pytest

import qcaed
from qcaed.gf2 import BinaryMatrix


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the long statistical checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def hamming():
    """(7,4) Hamming code parity-check matrix."""
    return BinaryMatrix.from_dense([
        [1, 1, 0, 1, 1, 0, 0],
        [1, 0, 1, 1, 0, 1, 0],
        [0, 1, 1, 1, 0, 0, 1]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=qcaed.list_standard_codes())
def std_code(request):
    return qcaed.load_standard_code(request.param)


@pytest.fixture
def ccsds():
    return qcaed.load_standard_code('ccsds_128_64')


@pytest.fixture
def nr5g():
    return qcaed.load_standard_code('nr5g_132_66')
