import numpy as np
import pytest

from relloc.elementary import ElementarySystem


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[ElementarySystem(1.2, 0.0, 1.5), ElementarySystem(0.8, 1.7, 2.5)], ids=["spin0", "spinS"])
def system(request):
    return request.param


@pytest.fixture
def spinning():
    return ElementarySystem(0.8, 1.7, 2.5)
