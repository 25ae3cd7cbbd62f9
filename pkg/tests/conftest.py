import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modeswitch import (OptimizerParams, make_double_tank, optimize,
                        schedule_from_blocks)

PAPER_PARAMS = dict(alpha=0.5, beta=0.5, eta=0.6)


@pytest.fixture(scope="session")
def tank():
    return make_double_tank()


@pytest.fixture(scope="session")
def tank_initial_schedule(tank):
    return schedule_from_blocks(tank.initial_blocks, tank.grid)


@pytest.fixture(scope="session")
def tank_run_200(tank, tank_initial_schedule):
    """One 200-iteration benchmark run shared by the convergence tests.

    Returns (trace, elapsed_seconds); deterministic, so any test may read
    any row.
    """
    params = OptimizerParams(max_iters=200, **PAPER_PARAMS)
    started = time.perf_counter()
    _, trace = optimize(tank.system, tank_initial_schedule, params, tank.x0)
    elapsed = time.perf_counter() - started
    return trace, elapsed
