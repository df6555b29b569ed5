import pytest

from cmqsearch.optimizer import SolverConfig
from cmqsearch.planner import build_table


@pytest.fixture(scope="session")
def solver_cfg():
    return SolverConfig()


@pytest.fixture(scope="session")
def table90(solver_cfg):
    """Plan table for the paper's headline setting: P_cri = 0.90, lambda0 = 1e-2."""
    return build_table(0.90, 1e-2, solver_cfg)
