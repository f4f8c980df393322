import warnings

import pytest

from odelta.solver import solve_odelta, solve_tstar


@pytest.fixture(scope="session")
def a_star():
    return solve_tstar()


@pytest.fixture(scope="session")
def odelta_point():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return solve_odelta(1.5, 2.5)
