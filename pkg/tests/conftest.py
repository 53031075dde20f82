import random

import pytest

from qcring.services.fixtures import load_fixture
from qcring.services.sector_model import standard_group


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(params=["Z2", "Z3", "S3"])
def group(request):
    return standard_group(request.param)


@pytest.fixture
def local_cy():
    return load_fixture("local_cy_genus_g")


@pytest.fixture
def hilb2():
    return load_fixture("hilb2_surface")


@pytest.fixture
def c2_zgamma():
    return load_fixture("c2_zgamma_pairing")


@pytest.fixture
def atiyah():
    return load_fixture("atiyah_flop")


@pytest.fixture
def mukai():
    return load_fixture("mukai_trivial")
