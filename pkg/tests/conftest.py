import math

import pytest

from strip_solver.modes import Params

# parameter sets spanning c^2 < a*eps, c^2 = a*eps and c^2 > a*eps
P_LESS = Params(epsilon=2.0, a=2.0, c=1.0, l=math.pi)
P_EQ = Params(epsilon=1.0, a=1.0, c=1.0, l=math.pi)
P_GTR = Params(epsilon=0.1, a=0.1, c=1.0, l=math.pi)

ALL_PARAM_SETS = (P_LESS, P_EQ, P_GTR)


@pytest.fixture
def p0():
    return P_EQ
