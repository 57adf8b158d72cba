import math

import pytest

from superfluid_om.materials import CylinderGeometry, HeliumProperties

TWO_PI = 2 * math.pi


@pytest.fixture
def geom():
    return CylinderGeometry()


@pytest.fixture
def he():
    return HeliumProperties()
