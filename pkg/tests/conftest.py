from fractions import Fraction

import pytest
from hypothesis import settings

from tollbooth.flows import Flow, LinearLatency
from tollbooth.network import Network

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def pigou():
    net = Network([(0, "s", "t"), (1, "s", "t")], "s", "t")
    lat = {0: LinearLatency(1, 0), 1: LinearLatency(0, 1)}
    return net, lat, Fraction(1)


@pytest.fixture
def pigou_opt():
    return Flow({0: Fraction(1, 2), 1: Fraction(1, 2)}, 1)
