import pytest

from ncspheres.ncalg import Algebra
from ncspheres.rmatrix import DeformParams, build_R_quaternionic
from ncspheres.scalars import EXACT
from ncspheres.spheres import build_sphere, compute_Y


def make_point(label, backend=EXACT, kind="seven_sphere"):
    """Algebra, sphere context, and Y system at one parameter point."""
    p = DeformParams.parse(label)
    alg = Algebra(build_R_quaternionic(p, backend), backend)
    s = build_sphere(alg, kind, params=p)
    ys = compute_Y(s)
    return p, alg, s, ys


@pytest.fixture(scope="session")
def pyth():
    """The main Pythagorean point: exact eigenphase available."""
    return make_point("3/5,4/5,0")


@pytest.fixture(scope="session")
def mixed():
    """A point with u2 != 0: no exact eigenphase, generators non-normal."""
    return make_point("1/3,2/3,2/3")


@pytest.fixture(scope="session")
def classical():
    return make_point("1,0,0")
