import numpy as np
import pytest

from modeswitch import (BadInterval, BudgetExceeded, OutOfRange, Schedule,
                        TimeGrid, brute_force_best_schedule,
                        classic_armijo_descent, evaluate_cost,
                        fd_insertion_gradient, flip_set, CellSet,
                        make_bimodal_tracker_n8, make_tracking_chain,
                        quadratic_objective, schedule_from_blocks,
                        simulate_state, smoothness_probe)
from reference import random_spd_matrix


def test_fd_zero_for_unchanged_mode(tank, tank_initial_schedule):
    assert fd_insertion_gradient(tank.system, tank_initial_schedule, tank.x0,
                                 cell=100, w=0, lam=tank.grid.dt) == 0.0


def test_fd_equals_single_cell_candidate_delta_bitwise(tank, tank_initial_schedule):
    # the optimizer's candidate evaluation and the FD quotient must share
    # the exact arithmetic path
    cell, w = 700, 1
    base = evaluate_cost(tank.system,
                         simulate_state(tank.system, tank_initial_schedule, tank.x0))
    candidate = flip_set(tank_initial_schedule,
                         CellSet.from_indices([cell], tank.grid))
    cand_cost = evaluate_cost(tank.system,
                              simulate_state(tank.system, candidate, tank.x0))
    fd = fd_insertion_gradient(tank.system, tank_initial_schedule, tank.x0,
                               cell, w, tank.grid.dt)
    assert fd == (cand_cost - base) / tank.grid.dt


def test_fd_full_horizon_replacement(tank, tank_initial_schedule):
    T = tank.grid.horizon
    base = evaluate_cost(tank.system,
                         simulate_state(tank.system, tank_initial_schedule, tank.x0))
    const_high = schedule_from_blocks([(1, T)], tank.grid)
    J_high = evaluate_cost(tank.system,
                           simulate_state(tank.system, const_high, tank.x0))
    fd = fd_insertion_gradient(tank.system, tank_initial_schedule, tank.x0,
                               cell=0, w=1, lam=T)
    assert fd == (J_high - base) / T


def test_fd_window_must_fit_horizon(tank, tank_initial_schedule):
    with pytest.raises(OutOfRange):
        fd_insertion_gradient(tank.system, tank_initial_schedule, tank.x0,
                              cell=1999, w=1, lam=2 * tank.grid.dt)
    with pytest.raises(ValueError):
        fd_insertion_gradient(tank.system, tank_initial_schedule, tank.x0,
                              cell=0, w=1, lam=0.5 * tank.grid.dt)


def test_classic_armijo_unit_quadratic_closed_form():
    # f(x) = x^2/2 from x0=1 with alpha=beta=0.5: the full step hits the
    # acceptance inequality with equality and lands exactly on 0
    run = classic_armijo_descent(quadratic_objective(np.eye(1)),
                                 np.array([1.0]), alpha=0.5, beta=0.5,
                                 max_iters=10)
    assert [x[0] for x in run.iterates] == [1.0, 0.0]
    assert run.backtrack_counts == [0]
    assert run.step_sizes == [1.0]
    assert run.stopped_on_gradient


def test_classic_armijo_step_lower_bound_on_random_quadratics():
    rng = np.random.default_rng(11)
    alpha = beta = 0.5
    for _ in range(100):
        q = random_spd_matrix(rng, int(rng.integers(2, 6)),
                              kappa=float(rng.uniform(2.0, 20.0)))
        lmax = float(np.linalg.eigvalsh(q).max())
        run = classic_armijo_descent(quadratic_objective(q),
                                     rng.standard_normal(q.shape[0]),
                                     alpha, beta, max_iters=50)
        for lam, gn in zip(run.step_sizes, run.grad_norms):
            assert lam >= (2.0 / lmax) * beta * (1.0 - alpha) * gn - 1e-12


def test_classic_armijo_constant_function_stops_immediately():
    def objective(x):
        return 1.0, np.zeros_like(x)

    run = classic_armijo_descent(objective, np.array([3.0, -1.0]),
                                 alpha=0.5, beta=0.5, max_iters=10)
    assert run.stopped_on_gradient
    assert len(run.iterates) == 1


def test_brute_force_two_cells_matches_hand_enumeration():
    chain = make_tracking_chain((0.0, 2.0), target=1.0, name="chain")
    grid = TimeGrid(horizon=2.0, dt=1.0)
    x0 = np.array([0.0])
    costs = {}
    for m0 in (0, 1):
        for m1 in (0, 1):
            s = Schedule(np.array([m0, m1]), grid)
            costs[(m0, m1)] = evaluate_cost(chain, simulate_state(chain, s, x0))
    best, best_cost = brute_force_best_schedule(chain, x0, grid)
    assert best_cost == min(costs.values())
    assert tuple(best.cell_modes) == min(costs, key=lambda k: (costs[k], k))


def test_brute_force_budget_enforced():
    bench = make_bimodal_tracker_n8()
    with pytest.raises(BudgetExceeded):
        brute_force_best_schedule(bench.system, bench.x0, bench.grid, budget=100)


def test_brute_force_long_horizon_tracks_target():
    # with enough cells the best schedule holds the state near the target
    chain = make_tracking_chain((0.0, 2.0), target=1.0, name="chain")
    grid = TimeGrid(horizon=6.0, dt=0.5)
    best, _ = brute_force_best_schedule(chain, np.array([0.0]), grid)
    traj = simulate_state(chain, best, np.array([0.0]))
    assert np.abs(traj.samples[4:, 0] - 1.0).max() < 0.6
    assert best.switch_count() >= 3  # alternates to stay near the target


def test_smoothness_probe_zero_gamma_gives_zero_deltas(tank, tank_initial_schedule):
    report = smoothness_probe(tank.system, tank_initial_schedule, tank.x0,
                              interval=(2.0, 4.0), gammas=[0.0])
    assert report.second_diff_quotients == (0.0,)
    assert report.lipschitz_ratios == (0.0,)
    assert report.set_ratios == (0.0,)


def test_smoothness_probe_identical_modes_all_zero():
    same = make_tracking_chain((1.0, 1.0), target=0.0, name="same")
    grid = TimeGrid(horizon=10.0, dt=0.1)
    s = schedule_from_blocks([(0, 10.0)], grid)
    report = smoothness_probe(same, s, np.array([1.0]), interval=(2.0, 4.0),
                              gammas=[0.4, 0.2])
    assert all(q == 0.0 for q in report.second_diff_quotients)
    assert all(r == 0.0 for r in report.lipschitz_ratios)


def test_smoothness_probe_rejects_interval_spanning_switch(tank, tank_initial_schedule):
    with pytest.raises(BadInterval):
        smoothness_probe(tank.system, tank_initial_schedule, tank.x0,
                         interval=(9.0, 11.0), gammas=[0.1])
    with pytest.raises(BadInterval):
        smoothness_probe(tank.system, tank_initial_schedule, tank.x0,
                         interval=(2.0, 4.0), gammas=[5.0])
