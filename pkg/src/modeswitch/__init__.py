"""Optimal mode scheduling for switched dynamical systems.

Computes schedules minimizing an integral state cost by steepest descent
directly in schedule space: insertion gradients from a backward costate
pass rank where mode flips pay off, and a backtracking step sized by the
Lebesgue measure of the flipped time guarantees sufficient descent.
"""

__version__ = "0.1.0"

from .errors import (BadBlocks, BadInterval, BudgetExceeded, ConfigError,
                     DimensionMismatch, EmptySelection, GradientVanished,
                     LengthMismatch, MissingColumn, MissingFile,
                     ModeswitchError, NonFiniteState, NotDescendable,
                     OutOfRange, StepSizeUnderflow)
from .gradient import GradientProfile, eta_level_set, gradient_profile, insertion_gradient_at
from .grid import TimeGrid
from .models import (BUILTIN_MODELS, Benchmark, make_bimodal_tracker_n8,
                     make_double_tank, make_switched_linear,
                     make_tracking_chain, make_trimodal_tracker)
from .optimizer import (AcceptedStep, IterationRecord, OptimizerParams,
                        RunStatus, RunTrace, SelectionRule, armijo_step,
                        check_sufficient_descent, optimize, select_subset)
from .oracles import (ArmijoRun, FDProbe, SmoothnessReport,
                      brute_force_best_schedule, classic_armijo_descent,
                      fd_insertion_gradient, quadratic_objective,
                      smoothness_probe)
from .schedule import (CellSet, Schedule, flip_set, schedule_from_blocks,
                       schedule_to_blocks, switch_count)
from .simulate import (CostatePath, Trajectory, evaluate_cost,
                       integrate_costate, simulate_state)
from .systems import JacobianReport, Mode, SwitchedSystem, check_jacobians
from .validation import run_fd_probes, run_validation_suite

__all__ = [name for name in dir() if not name.startswith("_")]
