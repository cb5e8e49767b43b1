import math

import numpy as np
import pytest

from qrot import RotationSpec

WORKED_AXIS = np.array([2.0, 1.0, 1.0]) / math.sqrt(6.0)
WORKED_VECTOR = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
WORKED_ANGLE = math.pi / 2.0
# Rotating WORKED_VECTOR by WORKED_ANGLE about WORKED_AXIS, evaluated by hand
# from the cross-product form u(u.x) + cos(t)(u x x) x u + sin(t)(u x x).
WORKED_ROTATED = np.array([0.76980036, 0.14919792, 0.62060244])


@pytest.fixture
def worked_spec():
    return RotationSpec(WORKED_AXIS, WORKED_ANGLE)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_spec(rng):
    return RotationSpec(random_unit(rng), rng.uniform(0.0, 2.0 * math.pi))


def random_state(rng):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    return psi / np.linalg.norm(psi)
