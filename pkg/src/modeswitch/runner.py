"""Orchestration of runs, replays, and validation into artifact payloads.

This layer is what both the HTTP service and the CLI call; it returns all
artifacts as strings so transport and file I/O stay at the edges.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass

from .artifacts import (profile_to_csv, schedule_from_csv, schedule_to_csv,
                        summary_to_json, trace_to_csv, trajectory_to_csv)
from .config import RunConfig, resolve_benchmark
from .errors import NotDescendable
from .gradient import eta_level_set, gradient_profile
from .optimizer import RunTrace, optimize
from .schedule import Schedule, schedule_from_blocks
from .simulate import evaluate_cost, integrate_costate, simulate_state
from .validation import run_validation_suite


@dataclass(frozen=True)
class RunResult:
    status: str
    summary: dict
    trace: RunTrace
    final_schedule: Schedule
    artifacts: dict[str, str]


@dataclass(frozen=True)
class ReplayResult:
    cost: float
    d_sigma: float
    artifacts: dict[str, str]


def _final_state_artifacts(benchmark, schedule: Schedule, eta: float) -> dict[str, str]:
    trajectory = simulate_state(benchmark.system, schedule, benchmark.x0)
    costate = integrate_costate(benchmark.system, schedule, trajectory)
    profile = gradient_profile(benchmark.system, schedule, trajectory, costate)
    try:
        eta_set = eta_level_set(profile, eta)
    except NotDescendable:
        eta_set = None
    return {
        "trajectory.csv": trajectory_to_csv(trajectory, costate, schedule),
        "profile.csv": profile_to_csv(profile, eta_set),
    }


def run_from_config(config: RunConfig) -> RunResult:
    benchmark = resolve_benchmark(config)
    initial = schedule_from_blocks(config.blocks, config.grid)
    started = time.perf_counter()
    final_schedule, trace = optimize(benchmark.system, initial,
                                     config.optimizer, benchmark.x0)
    elapsed = time.perf_counter() - started
    summary = {
        "model": config.model_name,
        "status": trace.status.value,
        "iterations": len(trace.records),
        "final_cost": trace.final.cost,
        "final_d_sigma": trace.final.d_sigma,
        "final_switch_count": trace.final.switch_count,
        "wall_time_s": elapsed,
    }
    artifacts = {
        "trace.csv": trace_to_csv(trace),
        "summary.json": summary_to_json(summary),
        "final_schedule.csv": schedule_to_csv(final_schedule),
    }
    artifacts.update(_final_state_artifacts(benchmark, final_schedule,
                                            config.optimizer.eta))
    return RunResult(trace.status.value, summary, trace, final_schedule, artifacts)


def replay_schedule(config: RunConfig, schedule_csv: str) -> ReplayResult:
    """Re-simulate a saved schedule under the config's model and grid."""
    benchmark = resolve_benchmark(config)
    schedule = schedule_from_csv(schedule_csv, config.grid)
    trajectory = simulate_state(benchmark.system, schedule, benchmark.x0)
    cost = evaluate_cost(benchmark.system, trajectory)
    costate = integrate_costate(benchmark.system, schedule, trajectory)
    profile = gradient_profile(benchmark.system, schedule, trajectory, costate)
    artifacts = {
        "trajectory.csv": trajectory_to_csv(trajectory, costate, schedule),
    }
    return ReplayResult(cost, profile.d_sigma, artifacts)


def validate(seed: int = 0) -> tuple[dict, dict[str, str]]:
    report = run_validation_suite(seed=seed).to_dict()
    artifacts = {
        "validation_report.json": json.dumps(report, indent=2) + "\n",
    }
    return report, artifacts
