import numpy as np
import pytest

from weylmeasure import BasisTruncation, PhasePoint


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pp(*coords):
    return PhasePoint.from_array(coords)


def trunc1(N):
    return BasisTruncation(1, N)
