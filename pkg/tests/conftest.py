import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wptate import ModulePresentation, WeightedRing  # noqa: E402

RATIONAL_IDEAL = [
    "x0*x2 - x1^2",
    "x0*x3 - x1*x2^2",
    "x0*x4 - x1*x3",
    "x1*x3 - x2^3",
    "x1*x4 - x2*x3",
    "x2^2*x4 - x3^2",
]


@pytest.fixture(scope="session")
def p112():
    return WeightedRing((1, 1, 2))


@pytest.fixture(scope="session")
def p11122():
    return WeightedRing((1, 1, 1, 2, 2))


@pytest.fixture(scope="session")
def elliptic(p112):
    return ModulePresentation.quotient(p112, ["x0^4+x1^4+x2^2"])


@pytest.fixture(scope="session")
def rational(p11122):
    return ModulePresentation.quotient(p11122, RATIONAL_IDEAL)


@pytest.fixture(scope="session")
def residue_field(p112):
    return ModulePresentation.quotient(p112, ["x0", "x1", "x2"])


@pytest.fixture(scope="session")
def structure_ring(p112):
    return ModulePresentation.free(p112)
